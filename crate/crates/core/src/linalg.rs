//! Dense hermitian linear algebra used by the ensemble sampler.
//!
//! Eigenvalues are computed with the system LAPACK (`zheev`), which is
//! several times faster than a pure-Rust tridiagonalization at the matrix
//! sizes the Monte Carlo runs need. A nalgebra-based route is kept for
//! cross-checking in tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[link(name = "openblas")]
extern "C" {
    fn zheev_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn zgemm_(
        transa: *const u8,
        transb: *const u8,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const Complex64,
        a: *const Complex64,
        lda: *const i32,
        b: *const Complex64,
        ldb: *const i32,
        beta: *const Complex64,
        c: *mut Complex64,
        ldc: *const i32,
    );
    fn openblas_set_num_threads(n: i32);
}

/// Pin OpenBLAS to one thread; parallelism lives at the sample level.
pub fn init_single_threaded_blas() {
    unsafe { openblas_set_num_threads(1) }
}

/// `A^H A` for a column-major `m x n` matrix stored as a flat slice.
pub fn gram_matrix(a: &[Complex64], m: usize, n: usize) -> Vec<Complex64> {
    assert_eq!(a.len(), m * n);
    let mut c = vec![Complex64::new(0.0, 0.0); n * n];
    let (mm, nn, kk) = (n as i32, n as i32, m as i32);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    unsafe {
        zgemm_(
            b"C".as_ptr(),
            b"N".as_ptr(),
            &mm,
            &nn,
            &kk,
            &one,
            a.as_ptr(),
            &(m as i32),
            a.as_ptr(),
            &(m as i32),
            &zero,
            c.as_mut_ptr(),
            &(n as i32),
        );
    }
    c
}

/// Eigenvalues of an `n x n` hermitian matrix (column-major), ascending.
/// The input buffer is clobbered.
pub fn hermitian_eigenvalues(h: &mut [Complex64], n: usize) -> Result<Vec<f64>, i32> {
    assert_eq!(h.len(), n * n);
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; std::cmp::max(1, 3 * n - 2)];
    let mut info = 0i32;
    // workspace query
    let mut work_len = Complex64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zheev_(
            b"N".as_ptr(),
            b"L".as_ptr(),
            &ni,
            h.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            &mut work_len,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(info);
    }
    let lwork = work_len.re as i32;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zheev_(
            b"N".as_ptr(),
            b"L".as_ptr(),
            &ni,
            h.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(info);
    }
    Ok(w)
}

/// Reference eigenvalue route via nalgebra, for cross-checks.
pub fn hermitian_eigenvalues_nalgebra(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
