//! Thin column-major wrappers over the handful of LAPACK routines we need.
//!
//! OpenBLAS is loaded with dlopen on first use instead of at link time: this
//! machine's CPU advertises (emulated) AVX-512 and the auto-dispatched
//! OpenBLAS kernels silently corrupt blocked QR/eigen results above n ≈ 150.
//! CPU detection runs in the library's load constructor, so pinning
//! OPENBLAS_CORETYPE only works if we set it before the load — hence the
//! lazy loader, plus a numerical self-test that refuses to continue on a
//! miscompiled kernel.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::ffi::{c_char, c_int, c_void};
use std::sync::OnceLock;

type DsyevFn = unsafe extern "C" fn(
    *const c_char, *const c_char, *const i32, *mut f64, *const i32, *mut f64,
    *mut f64, *const i32, *mut i32,
);
type ZheevFn = unsafe extern "C" fn(
    *const c_char, *const c_char, *const i32, *mut C64, *const i32, *mut f64,
    *mut C64, *const i32, *mut f64, *mut i32,
);
type DgeqrfFn = unsafe extern "C" fn(
    *const i32, *const i32, *mut f64, *const i32, *mut f64, *mut f64, *const i32, *mut i32,
);
type DorgqrFn = unsafe extern "C" fn(
    *const i32, *const i32, *const i32, *mut f64, *const i32, *const f64, *mut f64,
    *const i32, *mut i32,
);
type ZgeqrfFn = unsafe extern "C" fn(
    *const i32, *const i32, *mut C64, *const i32, *mut C64, *mut C64, *const i32, *mut i32,
);
type ZungqrFn = unsafe extern "C" fn(
    *const i32, *const i32, *const i32, *mut C64, *const i32, *const C64, *mut C64,
    *const i32, *mut i32,
);
type ZgesvdFn = unsafe extern "C" fn(
    *const c_char, *const c_char, *const i32, *const i32, *mut C64, *const i32, *mut f64,
    *mut C64, *const i32, *mut C64, *const i32, *mut C64, *const i32, *mut f64, *mut i32,
);
type DgelsFn = unsafe extern "C" fn(
    *const c_char, *const i32, *const i32, *const i32, *mut f64, *const i32, *mut f64,
    *const i32, *mut f64, *const i32, *mut i32,
);
type DgemmFn = unsafe extern "C" fn(
    *const c_char, *const c_char, *const i32, *const i32, *const i32, *const f64,
    *const f64, *const i32, *const f64, *const i32, *const f64, *mut f64, *const i32,
);
type SetThreadsFn = unsafe extern "C" fn(c_int);

struct Lapack {
    dsyev: DsyevFn,
    zheev: ZheevFn,
    dgeqrf: DgeqrfFn,
    dorgqr: DorgqrFn,
    zgeqrf: ZgeqrfFn,
    zungqr: ZungqrFn,
    zgesvd: ZgesvdFn,
    dgels: DgelsFn,
    dgemm: DgemmFn,
    set_threads: Option<SetThreadsFn>,
}

unsafe impl Sync for Lapack {}
unsafe impl Send for Lapack {}

extern "C" {
    fn dlopen(filename: *const c_char, flag: c_int) -> *mut c_void;
    fn dlsym(handle: *mut c_void, symbol: *const c_char) -> *mut c_void;
}

const RTLD_NOW: c_int = 0x2;
const RTLD_GLOBAL: c_int = 0x100;

fn lapack() -> &'static Lapack {
    static TABLE: OnceLock<Lapack> = OnceLock::new();
    TABLE.get_or_init(load)
}

fn load() -> Lapack {
    if std::env::var_os("OPENBLAS_CORETYPE").is_none() {
        // safe pre-AVX-512 kernel set; override via the environment if needed
        std::env::set_var("OPENBLAS_CORETYPE", "HASWELL");
    }
    let handle = ["libopenblas.so.0\0", "libopenblas.so\0", "liblapack.so.3\0"]
        .iter()
        .find_map(|name| {
            let h = unsafe { dlopen(name.as_ptr().cast(), RTLD_NOW | RTLD_GLOBAL) };
            (!h.is_null()).then_some(h)
        })
        .expect("no LAPACK library found (tried libopenblas.so[.0], liblapack.so.3)");
    let sym = |name: &str| -> *mut c_void {
        let c = format!("{name}\0");
        let p = unsafe { dlsym(handle, c.as_ptr().cast()) };
        assert!(!p.is_null(), "LAPACK symbol {name} not found");
        p
    };
    let table = unsafe {
        Lapack {
            dsyev: std::mem::transmute::<*mut c_void, DsyevFn>(sym("dsyev_")),
            zheev: std::mem::transmute::<*mut c_void, ZheevFn>(sym("zheev_")),
            dgeqrf: std::mem::transmute::<*mut c_void, DgeqrfFn>(sym("dgeqrf_")),
            dorgqr: std::mem::transmute::<*mut c_void, DorgqrFn>(sym("dorgqr_")),
            zgeqrf: std::mem::transmute::<*mut c_void, ZgeqrfFn>(sym("zgeqrf_")),
            zungqr: std::mem::transmute::<*mut c_void, ZungqrFn>(sym("zungqr_")),
            zgesvd: std::mem::transmute::<*mut c_void, ZgesvdFn>(sym("zgesvd_")),
            dgels: std::mem::transmute::<*mut c_void, DgelsFn>(sym("dgels_")),
            dgemm: std::mem::transmute::<*mut c_void, DgemmFn>(sym("dgemm_")),
            set_threads: {
                let c = "openblas_set_num_threads\0";
                let p = dlsym(handle, c.as_ptr().cast());
                (!p.is_null()).then(|| std::mem::transmute::<*mut c_void, SetThreadsFn>(p))
            },
        }
    };
    self_test(&table);
    table
}

// Blocked QR at n = 200 exercises exactly the code paths the broken kernels
// corrupt; refuse to run on a library that fails it.
fn self_test(lp: &Lapack) {
    let n = 200usize;
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut buf: Vec<f64> = (0..n * n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    qr_q_real_with(lp, n, n, &mut buf);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = (0..n).map(|k| buf[i * n + k] * buf[j * n + k]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    assert!(
        worst < 1e-10,
        "LAPACK self-test failed (QR orthogonality residual {worst:.2e}); \
         the loaded BLAS kernels are numerically broken on this CPU — try \
         setting OPENBLAS_CORETYPE=NEHALEM or pointing at a reference LAPACK"
    );
}

/// Caps the BLAS thread count. The samplers parallelize at the Monte Carlo
/// level, so nested BLAS threading only oversubscribes.
pub fn set_blas_threads(n: usize) {
    if let Some(f) = lapack().set_threads {
        unsafe { f(n as c_int) };
    }
}

fn to_fortran_f64(a: &Array2<f64>) -> Vec<f64> {
    let (m, n) = a.dim();
    let mut v = vec![0.0; m * n];
    for j in 0..n {
        for i in 0..m {
            v[j * m + i] = a[[i, j]];
        }
    }
    v
}

fn to_fortran_c64(a: &Array2<C64>) -> Vec<C64> {
    let (m, n) = a.dim();
    let mut v = vec![C64::new(0.0, 0.0); m * n];
    for j in 0..n {
        for i in 0..m {
            v[j * m + i] = a[[i, j]];
        }
    }
    v
}

fn from_fortran_c64(m: usize, n: usize, v: &[C64]) -> Array2<C64> {
    Array2::from_shape_fn((m, n), |(i, j)| v[j * m + i])
}

fn from_fortran_f64(m: usize, n: usize, v: &[f64]) -> Array2<f64> {
    Array2::from_shape_fn((m, n), |(i, j)| v[j * m + i])
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn eigvalsh(a: &Array2<f64>) -> Vec<f64> {
    dsyev(a, false).0
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a real symmetric matrix.
pub fn eigh(a: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let (w, v) = dsyev(a, true);
    (w, v.expect("vectors requested"))
}

fn dsyev(a: &Array2<f64>, vectors: bool) -> (Vec<f64>, Option<Array2<f64>>) {
    let lp = lapack();
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    if n == 0 {
        return (vec![], vectors.then(|| Array2::zeros((0, 0))));
    }
    let mut buf = to_fortran_f64(a);
    let mut w = vec![0.0; n];
    let jobz = if vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;
    let ni = n as i32;
    let mut info = 0;
    let mut work_query = [0.0f64];
    let lwork_query = -1i32;
    unsafe {
        (lp.dsyev)(&jobz, &uplo, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(), work_query.as_mut_ptr(), &lwork_query, &mut info);
    }
    let lwork = work_query[0] as i32;
    let mut work = vec![0.0; lwork.max(1) as usize];
    unsafe {
        (lp.dsyev)(&jobz, &uplo, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(), work.as_mut_ptr(), &lwork, &mut info);
    }
    assert_eq!(info, 0, "dsyev failed with info={info}");
    (w, vectors.then(|| from_fortran_f64(n, n, &buf)))
}

/// Eigenvalues (ascending) of a complex Hermitian matrix.
pub fn eigvalsh_c(a: &Array2<C64>) -> Vec<f64> {
    zheev(a, false).0
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a complex Hermitian matrix.
pub fn eigh_c(a: &Array2<C64>) -> (Vec<f64>, Array2<C64>) {
    let (w, v) = zheev(a, true);
    (w, v.expect("vectors requested"))
}

fn zheev(a: &Array2<C64>, vectors: bool) -> (Vec<f64>, Option<Array2<C64>>) {
    let lp = lapack();
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    if n == 0 {
        return (vec![], vectors.then(|| Array2::zeros((0, 0))));
    }
    let mut buf = to_fortran_c64(a);
    let mut w = vec![0.0; n];
    let mut rwork = vec![0.0; (3 * n).max(1)];
    let jobz = if vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;
    let ni = n as i32;
    let mut info = 0;
    let mut work_query = [C64::new(0.0, 0.0)];
    let lwork_query = -1i32;
    unsafe {
        (lp.zheev)(&jobz, &uplo, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(), work_query.as_mut_ptr(), &lwork_query, rwork.as_mut_ptr(), &mut info);
    }
    let lwork = work_query[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        (lp.zheev)(&jobz, &uplo, &ni, buf.as_mut_ptr(), &ni, w.as_mut_ptr(), work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info);
    }
    assert_eq!(info, 0, "zheev failed with info={info}");
    (w, vectors.then(|| from_fortran_c64(n, n, &buf)))
}

/// In-place thin QR of an m x n column-major real buffer (m >= n).
/// Returns the diagonal of R; the buffer is overwritten with Q (m x n).
pub fn qr_q_real(m: usize, n: usize, buf: &mut [f64]) -> Vec<f64> {
    qr_q_real_with(lapack(), m, n, buf)
}

fn qr_q_real_with(lp: &Lapack, m: usize, n: usize, buf: &mut [f64]) -> Vec<f64> {
    assert!(m >= n && buf.len() == m * n);
    let (mi, ni) = (m as i32, n as i32);
    let mut tau = vec![0.0; n];
    let mut info = 0;
    let mut wq = [0.0f64];
    unsafe {
        (lp.dgeqrf)(&mi, &ni, buf.as_mut_ptr(), &mi, tau.as_mut_ptr(), wq.as_mut_ptr(), &-1, &mut info);
    }
    let lwork = wq[0] as i32;
    let mut work = vec![0.0; lwork.max(1) as usize];
    unsafe {
        (lp.dgeqrf)(&mi, &ni, buf.as_mut_ptr(), &mi, tau.as_mut_ptr(), work.as_mut_ptr(), &lwork, &mut info);
    }
    assert_eq!(info, 0, "dgeqrf failed with info={info}");
    let rdiag: Vec<f64> = (0..n).map(|j| buf[j * m + j]).collect();
    let mut wq2 = [0.0f64];
    unsafe {
        (lp.dorgqr)(&mi, &ni, &ni, buf.as_mut_ptr(), &mi, tau.as_ptr(), wq2.as_mut_ptr(), &-1, &mut info);
    }
    let lwork2 = wq2[0] as i32;
    let mut work2 = vec![0.0; lwork2.max(1) as usize];
    unsafe {
        (lp.dorgqr)(&mi, &ni, &ni, buf.as_mut_ptr(), &mi, tau.as_ptr(), work2.as_mut_ptr(), &lwork2, &mut info);
    }
    assert_eq!(info, 0, "dorgqr failed with info={info}");
    rdiag
}

/// In-place thin QR of an m x n column-major complex buffer (m >= n).
/// Returns the diagonal of R; the buffer is overwritten with Q (m x n).
pub fn qr_q_complex(m: usize, n: usize, buf: &mut [C64]) -> Vec<C64> {
    let lp = lapack();
    assert!(m >= n && buf.len() == m * n);
    let (mi, ni) = (m as i32, n as i32);
    let mut tau = vec![C64::new(0.0, 0.0); n];
    let mut info = 0;
    let mut wq = [C64::new(0.0, 0.0)];
    unsafe {
        (lp.zgeqrf)(&mi, &ni, buf.as_mut_ptr(), &mi, tau.as_mut_ptr(), wq.as_mut_ptr(), &-1, &mut info);
    }
    let lwork = wq[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        (lp.zgeqrf)(&mi, &ni, buf.as_mut_ptr(), &mi, tau.as_mut_ptr(), work.as_mut_ptr(), &lwork, &mut info);
    }
    assert_eq!(info, 0, "zgeqrf failed with info={info}");
    let rdiag: Vec<C64> = (0..n).map(|j| buf[j * m + j]).collect();
    let mut wq2 = [C64::new(0.0, 0.0)];
    unsafe {
        (lp.zungqr)(&mi, &ni, &ni, buf.as_mut_ptr(), &mi, tau.as_ptr(), wq2.as_mut_ptr(), &-1, &mut info);
    }
    let lwork2 = wq2[0].re as i32;
    let mut work2 = vec![C64::new(0.0, 0.0); lwork2.max(1) as usize];
    unsafe {
        (lp.zungqr)(&mi, &ni, &ni, buf.as_mut_ptr(), &mi, tau.as_ptr(), work2.as_mut_ptr(), &lwork2, &mut info);
    }
    assert_eq!(info, 0, "zungqr failed with info={info}");
    rdiag
}

/// Singular values (descending) of a complex matrix.
pub fn singular_values(a: &Array2<C64>) -> Vec<f64> {
    let lp = lapack();
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return vec![];
    }
    let mut buf = to_fortran_c64(a);
    let k = m.min(n);
    let mut s = vec![0.0; k];
    let mut rwork = vec![0.0; 5 * k];
    let jobn = b'N' as c_char;
    let (mi, ni) = (m as i32, n as i32);
    let mut info = 0;
    let ldu = 1i32;
    let mut wq = [C64::new(0.0, 0.0)];
    unsafe {
        (lp.zgesvd)(&jobn, &jobn, &mi, &ni, buf.as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, wq.as_mut_ptr(), &-1, rwork.as_mut_ptr(), &mut info);
    }
    let lwork = wq[0].re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        (lp.zgesvd)(&jobn, &jobn, &mi, &ni, buf.as_mut_ptr(), &mi, s.as_mut_ptr(), std::ptr::null_mut(), &ldu, std::ptr::null_mut(), &ldu, work.as_mut_ptr(), &lwork, rwork.as_mut_ptr(), &mut info);
    }
    assert_eq!(info, 0, "zgesvd failed with info={info}");
    s
}

/// Least-squares solution of the overdetermined system A x = b (m >= n).
pub fn lstsq(a: &Array2<f64>, b: &[f64]) -> Vec<f64> {
    let lp = lapack();
    let (m, n) = a.dim();
    assert!(m >= n && b.len() == m);
    let mut abuf = to_fortran_f64(a);
    let mut bbuf = b.to_vec();
    let trans = b'N' as c_char;
    let (mi, ni) = (m as i32, n as i32);
    let one = 1i32;
    let mut info = 0;
    let mut wq = [0.0f64];
    unsafe {
        (lp.dgels)(&trans, &mi, &ni, &one, abuf.as_mut_ptr(), &mi, bbuf.as_mut_ptr(), &mi, wq.as_mut_ptr(), &-1, &mut info);
    }
    let lwork = wq[0] as i32;
    let mut work = vec![0.0; lwork.max(1) as usize];
    unsafe {
        (lp.dgels)(&trans, &mi, &ni, &one, abuf.as_mut_ptr(), &mi, bbuf.as_mut_ptr(), &mi, work.as_mut_ptr(), &lwork, &mut info);
    }
    assert_eq!(info, 0, "dgels failed with info={info}");
    bbuf.truncate(n);
    bbuf
}

/// C = Aᵀ B for column-major buffers: A is k x m, B is k x n, C is m x n.
pub fn at_b_colmajor(k: usize, m: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
    let lp = lapack();
    assert!(a.len() == k * m && b.len() == k * n && c.len() == m * n);
    let (t, nt) = (b'T' as c_char, b'N' as c_char);
    let (mi, ni, ki) = (m as i32, n as i32, k as i32);
    let (alpha, beta) = (1.0, 0.0);
    unsafe {
        (lp.dgemm)(&t, &nt, &mi, &ni, &ki, &alpha, a.as_ptr(), &ki, b.as_ptr(), &ki, &beta, c.as_mut_ptr(), &mi);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn real_symmetric_eigen() {
        let a = array![[2.0, 1.0], [1.0, 2.0]];
        let (w, v) = eigh(&a);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 3.0, epsilon = 1e-12);
        for k in 0..2 {
            for i in 0..2 {
                let av: f64 = (0..2).map(|j| a[[i, j]] * v[[j, k]]).sum();
                assert_abs_diff_eq!(av, w[k] * v[[i, k]], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn large_blocked_eigen_paths_are_sane() {
        // exercises the blocked LAPACK code paths that the broken
        // auto-dispatched kernels corrupt
        let n = 300usize;
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            let x = ((i * 31 + j * 17) % 101) as f64 / 101.0 - 0.5;
            if i == j { x + 2.0 } else { x + ((j * 31 + i * 17) % 101) as f64 / 101.0 - 0.5 }
        });
        let sym = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (a[[i, j]] + a[[j, i]]));
        let (w, v) = eigh(&sym);
        // eigenvector columns orthonormal, residual ||Av - wv|| small
        for k in [0usize, n / 2, n - 1] {
            let norm: f64 = (0..n).map(|i| v[[i, k]] * v[[i, k]]).sum();
            assert!((norm - 1.0).abs() < 1e-10, "column norm {norm}");
            for i in 0..n {
                let av: f64 = (0..n).map(|j| sym[[i, j]] * v[[j, k]]).sum();
                assert!((av - w[k] * v[[i, k]]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn hermitian_eigen_and_svd() {
        let i = C64::new(0.0, 1.0);
        let a = array![
            [C64::new(1.0, 0.0), C64::new(0.0, -0.5)],
            [C64::new(0.0, 0.5), C64::new(1.0, 0.0)]
        ];
        let w = eigvalsh_c(&a);
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 1.5, epsilon = 1e-12);
        let (w2, v) = eigh_c(&a);
        for k in 0..2 {
            for r in 0..2 {
                let av: C64 = (0..2).map(|c| a[[r, c]] * v[[c, k]]).sum();
                assert!((av - v[[r, k]] * w2[k]).norm() < 1e-12);
            }
        }
        let b = array![[C64::new(3.0, 0.0), i * 0.0], [C64::new(0.0, 0.0), C64::new(0.0, -2.0)]];
        let s = singular_values(&b);
        assert_abs_diff_eq!(s[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn qr_orthonormal_columns_small_and_large() {
        for m in [7usize, 250] {
            let mut buf: Vec<f64> = (0..m * m)
                .map(|k| ((k * 2654435761 + 13) % 1000) as f64 / 500.0 - 1.0)
                .collect();
            let _r = qr_q_real(m, m, &mut buf);
            let mut worst: f64 = 0.0;
            for c1 in 0..m {
                for c2 in 0..=c1 {
                    let dot: f64 = (0..m).map(|r| buf[c1 * m + r] * buf[c2 * m + r]).sum();
                    let expect = if c1 == c2 { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expect).abs());
                }
            }
            assert!(worst < 1e-11, "m={m}: residual {worst}");
        }
    }

    #[test]
    fn least_squares_line_fit() {
        let xs: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
        let a = Array2::from_shape_fn((4, 2), |(i, j)| xs[i].powi(j as i32));
        let b: Vec<f64> = xs.iter().map(|&x| 2.0 * x + 1.0).collect();
        let sol = lstsq(&a, &b);
        assert_abs_diff_eq!(sol[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol[1], 2.0, epsilon = 1e-12);
    }
}
