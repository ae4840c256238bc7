use charpoly_core::linalg;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::time::Instant;

fn main() {
    linalg::init_single_threaded_blas();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for &(n, m) in &[(64usize, 128usize), (128, 256), (256, 1024)] {
        // draw A (m x n), column major
        let t0 = Instant::now();
        let a: Vec<Complex64> = (0..m * n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        let t_draw = t0.elapsed();

        let t0 = Instant::now();
        let mut h = linalg::gram_matrix(&a, m, n);
        for x in h.iter_mut() {
            *x /= n as f64;
        }
        let t_gram = t0.elapsed();

        let h_mat = DMatrix::from_column_slice(n, n, &h);

        let t0 = Instant::now();
        let eig = linalg::hermitian_eigenvalues(&mut h, n).unwrap();
        let t_eig = t0.elapsed();

        let t0 = Instant::now();
        let eig_na = linalg::hermitian_eigenvalues_nalgebra(&h_mat);
        let t_eig_na = t0.elapsed();

        let t0 = Instant::now();
        let g2 = h_mat.adjoint() * &h_mat;
        let t_gemm_na = t0.elapsed();
        std::hint::black_box(g2);

        let max_diff = eig
            .iter()
            .zip(eig_na.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!(
            "n={n} m={m}: draw {:?}, zgemm {:?}, zheev {:?}, na_eig {:?}, na_gemm(nxn) {:?}, max eig diff {:.2e}, trace check {:.3e}",
            t_draw, t_gram, t_eig, t_eig_na, t_gemm_na, max_diff,
            (eig.iter().sum::<f64>() - a.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64).abs()
        );
    }
}
