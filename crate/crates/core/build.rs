fn main() {
    // LAPACK routines (zgeev, zgesdd) come from the system OpenBLAS, which
    // bundles the full LAPACK symbol set on this toolchain's targets.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
