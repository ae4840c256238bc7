//! Sampling of hermitian sample covariance matrices `H = n^{-1} A* A` and
//! stable evaluation of products of their characteristic polynomials.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{fingerprint, sample_rng};
use crate::signlog::SignLog;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Common law of `Re a` and `Im a`: symmetric about 0 with variance 1/2,
/// so that `E|a|^2 = 1` and `E a^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntryDistribution {
    ComplexGaussian,
    /// Components take the values `±2^{-1/2}` with probability 1/2 each.
    Rademacher,
    /// Components take `±(4q)^{-1/2}` with probability `q` each, 0 otherwise;
    /// `q` in (0, 1/2] dials the fourth moment to `1/(8q)`.
    ThreePoint { q: f64 },
}

impl EntryDistribution {
    pub fn three_point(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "three-point atom probability q must lie in (0, 1/2], got {q}"
            )));
        }
        Ok(Self::ThreePoint { q })
    }

    /// Exact fourth moment of one component.
    pub fn mu4(&self) -> f64 {
        match self {
            Self::ComplexGaussian => 0.75,
            Self::Rademacher => 0.25,
            Self::ThreePoint { q } => 1.0 / (8.0 * q),
        }
    }

    /// Fourth-cumulant excess `mu4 - 3/4`; the only distribution-dependent
    /// quantity that survives in the limit formulas.
    pub fn kappa4(&self) -> f64 {
        self.mu4() - 0.75
    }

    /// Draw one component (the law of `Re a`, identically `Im a`).
    #[inline]
    pub fn sample_component<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Self::ComplexGaussian => {
                let x: f64 = rng.sample(StandardNormal);
                x * std::f64::consts::FRAC_1_SQRT_2
            }
            Self::Rademacher => {
                if rng.gen::<bool>() {
                    std::f64::consts::FRAC_1_SQRT_2
                } else {
                    -std::f64::consts::FRAC_1_SQRT_2
                }
            }
            Self::ThreePoint { q } => {
                let u: f64 = rng.gen();
                let atom = 0.5 / q.sqrt();
                if u < *q {
                    atom
                } else if u < 2.0 * q {
                    -atom
                } else {
                    0.0
                }
            }
        }
    }

    fn tag(&self) -> u64 {
        match self {
            Self::ComplexGaussian => 1,
            Self::Rademacher => 2,
            Self::ThreePoint { q } => 3 ^ q.to_bits(),
        }
    }
}

/// Dimensions, entry law and stream seed of one ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub m: usize,
    pub dist: EntryDistribution,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(n: usize, m: usize, dist: EntryDistribution, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("matrix dimension n must be positive".into()));
        }
        if m < n {
            return Err(Error::InvalidConfig(format!(
                "factor dimension m = {m} must be at least n = {n} (aspect ratio c >= 1)"
            )));
        }
        if let EntryDistribution::ThreePoint { q } = dist {
            EntryDistribution::three_point(q)?;
        }
        Ok(Self { n, m, dist, seed })
    }

    /// Finite-n aspect ratio `c_{m,n} = m/n`.
    pub fn aspect_ratio(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    fn hash(&self, index: u64) -> u64 {
        fingerprint(&[
            self.n as u64,
            self.m as u64,
            self.dist.tag(),
            self.seed,
            index,
        ])
    }
}

/// Eigenvalues of one realization, ascending, with a provenance token.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSpectrum {
    eigenvalues: Vec<f64>,
    config_hash: u64,
}

impl SampleSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn config_hash(&self) -> u64 {
        self.config_hash
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Audit row `index,eig_1,...,eig_n`.
    pub fn to_csv_row(&self, index: u64) -> String {
        let mut row = index.to_string();
        for e in &self.eigenvalues {
            row.push(',');
            row.push_str(&format!("{e:.17e}"));
        }
        row
    }
}

/// The `m x n` factor matrix of sample `index`, column-major. Exposed so
/// audits can recompute trace identities from the same draw.
pub fn draw_factor_matrix(config: &EnsembleConfig, index: u64) -> Vec<Complex64> {
    let mut rng = sample_rng(config.seed, index);
    let (m, n) = (config.m, config.n);
    let mut a = Vec::with_capacity(m * n);
    for _ in 0..m * n {
        let re = config.dist.sample_component(&mut rng);
        let im = config.dist.sample_component(&mut rng);
        a.push(Complex64::new(re, im));
    }
    a
}

/// Spectrum of `H = n^{-1} A* A` for sample `index`. A pure function of
/// `(config, index)`: bit-identical across runs and thread schedules.
pub fn sample_spectrum(config: &EnsembleConfig, index: u64) -> Result<SampleSpectrum> {
    let a = draw_factor_matrix(config, index);
    let n = config.n;
    let mut h = linalg::gram_matrix(&a, config.m, n);
    let scale = 1.0 / n as f64;
    for x in h.iter_mut() {
        *x *= scale;
    }
    let eigenvalues = linalg::hermitian_eigenvalues(&mut h, n).map_err(|info| Error::EigenSolve {
        n,
        m: config.m,
        seed: config.seed,
        index,
        info,
    })?;
    // H is positive semidefinite; anything below the backward-error scale
    // indicates a solver breakdown rather than a legitimate spectrum.
    let lam_max = eigenvalues.last().copied().unwrap_or(0.0);
    let floor = -1e-10 * lam_max.abs().max(1.0);
    if eigenvalues.first().copied().unwrap_or(0.0) < floor {
        return Err(Error::EigenSolve {
            n,
            m: config.m,
            seed: config.seed,
            index,
            info: -1,
        });
    }
    Ok(SampleSpectrum {
        eigenvalues,
        config_hash: config.hash(index),
    })
}

/// `prod_j det(lambda_j - H)` evaluated from the spectrum in signed-log form.
///
/// An exact coincidence `lambda_j = eig_i` legally yields the zero SignLog.
pub fn char_poly_product(spectrum: &SampleSpectrum, lambdas: &[f64]) -> SignLog {
    assert!(
        !spectrum.eigenvalues.is_empty(),
        "char_poly_product needs a non-empty spectrum"
    );
    let mut sign = 1i8;
    let mut log_mag = 0.0f64;
    for &lambda in lambdas {
        for &eig in &spectrum.eigenvalues {
            let d = lambda - eig;
            if d == 0.0 {
                return SignLog::ZERO;
            }
            if d < 0.0 {
                sign = -sign;
            }
            log_mag += d.abs().ln();
        }
    }
    SignLog::new(sign, log_mag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn gaussian_config(n: usize, m: usize, seed: u64) -> EnsembleConfig {
        EnsembleConfig::new(n, m, EntryDistribution::ComplexGaussian, seed).unwrap()
    }

    #[test]
    fn rejects_wide_matrices_and_bad_q() {
        assert!(EnsembleConfig::new(4, 3, EntryDistribution::ComplexGaussian, 0).is_err());
        assert!(EntryDistribution::three_point(0.0).is_err());
        assert!(EntryDistribution::three_point(0.6).is_err());
        assert!(EntryDistribution::three_point(0.5).is_ok());
    }

    #[test]
    fn fourth_moments() {
        assert_eq!(EntryDistribution::ComplexGaussian.kappa4(), 0.0);
        assert_eq!(EntryDistribution::Rademacher.kappa4(), -0.5);
        let tp = EntryDistribution::three_point(0.125).unwrap();
        assert!((tp.mu4() - 1.0).abs() < 1e-15);
        assert!((tp.kappa4() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn scalar_case_is_exponential() {
        // n = m = 1: the single eigenvalue is |a_11|^2 ~ Exp(1).
        let config = gaussian_config(1, 1, 11);
        let mut sum = 0.0;
        let draws = 100_000;
        for i in 0..draws {
            sum += sample_spectrum(&config, i).unwrap().eigenvalues()[0];
        }
        let mean = sum / draws as f64;
        assert!((0.98..=1.02).contains(&mean), "mean = {mean}");
    }

    #[test]
    fn trace_identity_and_psd() {
        for &(n, m) in &[(2usize, 2usize), (8, 16), (64, 128)] {
            for dist in [
                EntryDistribution::ComplexGaussian,
                EntryDistribution::Rademacher,
                EntryDistribution::three_point(0.125).unwrap(),
            ] {
                let config = EnsembleConfig::new(n, m, dist, 5).unwrap();
                let spec = sample_spectrum(&config, 3).unwrap();
                let a = draw_factor_matrix(&config, 3);
                let trace: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
                let eig_sum: f64 = spec.eigenvalues().iter().sum();
                assert!(
                    (trace - eig_sum).abs() <= 1e-10 * trace.abs(),
                    "trace {trace} vs eig sum {eig_sum}"
                );
                let floor = -1e-10 * spec.max_eigenvalue();
                assert!(spec.eigenvalues().iter().all(|&e| e >= floor));
            }
        }
    }

    #[test]
    fn spectra_are_bit_identical_across_calls() {
        let config = gaussian_config(16, 32, 99);
        let a = sample_spectrum(&config, 7).unwrap();
        let b = sample_spectrum(&config, 7).unwrap();
        assert_eq!(a, b);
        let bits_a: Vec<u64> = a.eigenvalues().iter().map(|e| e.to_bits()).collect();
        let bits_b: Vec<u64> = b.eigenvalues().iter().map(|e| e.to_bits()).collect();
        assert_eq!(bits_a, bits_b);
        assert_ne!(a, sample_spectrum(&config, 8).unwrap());
    }

    #[test]
    fn char_poly_small_cases() {
        let spec = SampleSpectrum {
            eigenvalues: vec![1.0, 2.0],
            config_hash: 0,
        };
        let p = char_poly_product(&spec, &[3.0, 3.0]);
        assert_eq!(p.sign, 1);
        assert!((p.log_mag - 4.0f64.ln()).abs() < 1e-14);

        let spec = SampleSpectrum {
            eigenvalues: vec![1.0, 3.0],
            config_hash: 0,
        };
        let p = char_poly_product(&spec, &[2.0, 2.0]);
        assert_eq!(p.sign, 1);
        assert!(p.log_mag.abs() < 1e-14);

        let coincident = char_poly_product(&spec, &[3.0, 5.0]);
        assert_eq!(coincident.sign, 0);
    }

    #[test]
    fn char_poly_matches_dense_determinant() {
        // Row-reduction determinant of (lambda I - H) on an explicit H.
        let config = gaussian_config(6, 9, 21);
        let spec = sample_spectrum(&config, 0).unwrap();
        let a = draw_factor_matrix(&config, 0);
        let mut h = crate::linalg::gram_matrix(&a, 9, 6);
        for x in h.iter_mut() {
            *x /= 6.0;
        }
        let lambdas = [0.7, 2.9];
        let mut expected = SignLog::ONE;
        for &lambda in &lambdas {
            expected = expected * dense_det_shifted(&h, 6, lambda);
        }
        let got = char_poly_product(&spec, &lambdas);
        assert_eq!(got.sign, expected.sign);
        assert!(
            (got.log_mag - expected.log_mag).abs() < 1e-8 * expected.log_mag.abs().max(1.0),
            "got {:?} expected {:?}",
            got,
            expected
        );
    }

    /// det(lambda - H) by LU with partial pivoting, in signed-log form.
    fn dense_det_shifted(h: &[Complex64], n: usize, lambda: f64) -> SignLog {
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = -h[j * n + i]; // column-major input
                if i == j {
                    a[i * n + j] += lambda;
                }
            }
        }
        let mut sign = 1i8;
        let mut log_mag = 0.0;
        let mut phase = 0.0;
        for col in 0..n {
            let (piv, piv_norm) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap();
            if piv_norm == 0.0 {
                return SignLog::ZERO;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                sign = -sign;
            }
            let d = a[col * n + col];
            log_mag += d.norm().ln();
            phase += d.arg();
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        // determinant of a shifted hermitian matrix is real
        let c = phase.cos();
        assert!(c.abs() > 0.999, "unexpected residual phase {phase}");
        SignLog::new(if c > 0.0 { sign } else { -sign }, log_mag)
    }

    #[test]
    fn empirical_moments_match_law() {
        for dist in [
            EntryDistribution::ComplexGaussian,
            EntryDistribution::Rademacher,
            EntryDistribution::three_point(0.125).unwrap(),
        ] {
            let mut rng = crate::rng::sample_rng(2024, 0);
            let n = 1_000_000usize;
            let (mut s1, mut s2, mut s3, mut s4, mut s6, mut s8) =
                (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
            for _ in 0..n {
                let x = dist.sample_component(&mut rng);
                let x2 = x * x;
                s1 += x;
                s2 += x2;
                s3 += x2 * x;
                s4 += x2 * x2;
                s6 += x2 * x2 * x2;
                s8 += x2 * x2 * x2 * x2;
            }
            let nf = n as f64;
            let (m1, m2, m3, m4, m6, m8) =
                (s1 / nf, s2 / nf, s3 / nf, s4 / nf, s6 / nf, s8 / nf);
            // 4 standard errors of each empirical moment
            let se1 = (m2 / nf).sqrt();
            let se2 = ((m4 - m2 * m2).max(0.0) / nf).sqrt();
            let se3 = ((m6 - m3 * m3).max(0.0) / nf).sqrt();
            let se4 = ((m8 - m4 * m4).max(0.0) / nf).sqrt();
            assert!(m1.abs() < 4.0 * se1, "{dist:?}: mean {m1}");
            assert!((m2 - 0.5).abs() < 4.0 * se2, "{dist:?}: var {m2}");
            assert!(m3.abs() < 4.0 * se3, "{dist:?}: third {m3}");
            assert!(
                (m4 - dist.mu4()).abs() < 4.0 * se4,
                "{dist:?}: mu4 {m4} vs {}",
                dist.mu4()
            );
        }
    }

    #[test]
    fn csv_row_roundtrip() {
        let config = gaussian_config(3, 4, 1);
        let spec = sample_spectrum(&config, 2).unwrap();
        let row = spec.to_csv_row(2);
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert_eq!(fields[0], "2");
        for (f, e) in fields[1..].iter().zip(spec.eigenvalues()) {
            assert_eq!(f.parse::<f64>().unwrap(), *e);
        }
    }

    #[test]
    fn huge_lambdas_give_positive_sign() {
        let config = gaussian_config(12, 24, 3);
        let spec = sample_spectrum(&config, 0).unwrap();
        let p = char_poly_product(&spec, &[1e6, 2e6]);
        assert_eq!(p.sign, 1);
    }

    #[test]
    fn gaussian_component_has_half_variance() {
        let dist = EntryDistribution::ComplexGaussian;
        let mut rng = crate::rng::sample_rng(5, 5);
        let mut sum_sq = 0.0;
        for _ in 0..200_000 {
            let x = dist.sample_component(&mut rng);
            sum_sq += x * x;
        }
        assert!((sum_sq / 200_000.0 - 0.5).abs() < 0.01);
        let mut r = crate::rng::sample_rng(5, 6);
        let modulus_sq: f64 = (0..200_000)
            .map(|_| {
                let re = dist.sample_component(&mut r);
                let im = dist.sample_component(&mut r);
                re * re + im * im
            })
            .sum::<f64>()
            / 200_000.0;
        assert!((modulus_sq - 1.0).abs() < 0.02);
    }

    #[test]
    fn eigensolver_routes_agree() {
        let config = gaussian_config(32, 64, 77);
        let spec = sample_spectrum(&config, 0).unwrap();
        let a = draw_factor_matrix(&config, 0);
        let mut h = crate::linalg::gram_matrix(&a, 64, 32);
        for x in h.iter_mut() {
            *x /= 32.0;
        }
        let h_na = nalgebra::DMatrix::from_column_slice(32, 32, &h);
        let reference = crate::linalg::hermitian_eigenvalues_nalgebra(&h_na);
        for (a, b) in spec.eigenvalues().iter().zip(reference.iter()) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }
}
