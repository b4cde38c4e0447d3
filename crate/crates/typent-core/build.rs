fn main() {
    // OpenBLAS is loaded lazily at runtime (dlopen) so the library can pin
    // OPENBLAS_CORETYPE before its CPU-detection constructor runs; no
    // link-time BLAS dependency.
}
