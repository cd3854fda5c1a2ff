//! Seeded matrix generators and brute-force verifiers.
//!
//! Generators are reproducible across languages: the stream is SplitMix64
//!
//! ```text
//! state = state + 0x9E3779B97F4A7C15            (wrapping)
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! out = z ^ (z >> 31)
//! ```
//!
//! a uniform draw is `(out >> 11) * 2^-53`, and a pseudo-normal draw is the
//! sum of twelve uniforms minus six. A complex entry is
//! `(normal + i normal) / sqrt(2)`, real part drawn first. Matrices are
//! filled row-major.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::matrix::{dot, vec_norm, ComplexMatrix, ZERO};
use crate::tolerance::Tolerances;

/// Largest dimension accepted by [`psd_by_minors`].
pub const MINORS_MAX_DIM: usize = 12;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Approximately standard normal: twelve uniforms minus six.
    pub fn normal(&mut self) -> f64 {
        (0..12).map(|_| self.uniform()).sum::<f64>() - 6.0
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Mixes a base seed with an index into an independent child seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut s = SplitMix64::new(base ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    s.next_u64()
}

/// Seed plus dimension; every generator below is a pure function of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededGenerator {
    pub seed: u64,
    pub n: usize,
}

impl SeededGenerator {
    pub fn new(seed: u64, n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        SeededGenerator { seed, n }
    }

    pub fn stream(&self) -> SplitMix64 {
        SplitMix64::new(self.seed)
    }
}

/// `n x cols` complex pseudo-normal matrix, stored as columns.
fn draw_factor(rng: &mut SplitMix64, n: usize, cols: usize) -> Vec<Vec<Complex64>> {
    let mut g = vec![vec![ZERO; n]; cols];
    for i in 0..n {
        for col in g.iter_mut() {
            col[i] = rng.complex_normal();
        }
    }
    g
}

/// `G G*` for a factor given by its columns.
fn gram(n: usize, factor: &[Vec<Complex64>]) -> HermitianMatrix {
    let m = ComplexMatrix::from_fn(n, |i, j| {
        factor.iter().map(|col| col[i] * col[j].conj()).sum()
    });
    HermitianMatrix::symmetrized(m)
}

fn draw_gram(rng: &mut SplitMix64, n: usize, rank: usize) -> HermitianMatrix {
    gram(n, &draw_factor(rng, n, rank))
}

/// `G G*` with `G` an `n x r` pseudo-normal factor (`r = rank`, default `n`).
/// PSD by construction with rank at most `r`.
pub fn gen_psd(g: &SeededGenerator, rank: Option<usize>) -> HermitianMatrix {
    let r = rank.unwrap_or(g.n);
    assert!(r <= g.n, "rank {r} exceeds dimension {}", g.n);
    draw_gram(&mut g.stream(), g.n, r)
}

/// Random Hermitian matrix `(X + X*) / 2` with pseudo-normal `X`.
pub fn gen_hermitian(g: &SeededGenerator) -> HermitianMatrix {
    let mut rng = g.stream();
    let n = g.n;
    let x = ComplexMatrix::from_fn(n, |_, _| rng.complex_normal());
    HermitianMatrix::symmetrized((&x + &x.adjoint()).scale_real(0.5))
}

/// Unitary from modified Gram–Schmidt on a pseudo-normal matrix.
pub fn gen_unitary(g: &SeededGenerator) -> ComplexMatrix {
    let mut rng = g.stream();
    let n = g.n;
    let mut cols = draw_factor(&mut rng, n, n);
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj = dot(&done[k], &rest[0]);
            for (z, q) in rest[0].iter_mut().zip(&done[k]) {
                *z -= proj * q;
            }
        }
        let norm = vec_norm(&cols[j]);
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_columns(&cols)
}

/// `(A, B)` with `B = H H*` and `A = B + G G*` for seeded factors of rank
/// `rank_h` and `rank_g`, so `A >= B >= 0` holds exactly in exact arithmetic.
pub fn gen_dominated_pair_with_ranks(
    g: &SeededGenerator,
    rank_h: usize,
    rank_g: usize,
) -> (HermitianMatrix, HermitianMatrix) {
    assert!(rank_h <= g.n && rank_g <= g.n);
    let mut rng = g.stream();
    dominated_from_stream(&mut rng, g.n, rank_h, rank_g)
}

fn dominated_from_stream(
    rng: &mut SplitMix64,
    n: usize,
    rank_h: usize,
    rank_g: usize,
) -> (HermitianMatrix, HermitianMatrix) {
    let b = draw_gram(rng, n, rank_h);
    let gg = draw_gram(rng, n, rank_g);
    let a = HermitianMatrix::symmetrized(b.as_matrix() + gg.as_matrix());
    (a, b)
}

/// Dominated pair with ranks drawn from the seed: `rank_h` uniform in
/// `0..=n`, then `rank_g` uniform in `n - rank_h..=n`, so `A` has no kernel
/// shared with `B` beyond what rounding introduces.
pub fn gen_dominated_pair(g: &SeededGenerator) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = g.stream();
    let n = g.n;
    let rank_h = rng.int_in(0, n);
    let rank_g = rng.int_in(n - rank_h, n);
    dominated_from_stream(&mut rng, n, rank_h, rank_g)
}

/// Coefficients of `B = c0 I + c1 A + c2 A^2 + i (d0 I + d1 A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialCoefficients {
    pub c: [f64; 3],
    pub d: [f64; 2],
}

/// `B = c0 I + c1 A + c2 A^2 + i (d0 I + d1 A)`.
pub fn polynomial_commutant(a: &HermitianMatrix, k: &PolynomialCoefficients) -> ComplexMatrix {
    let n = a.dim();
    let am = a.as_matrix();
    let a2 = am * am;
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_fn(n, |r, s| {
        let id = if r == s { 1.0 } else { 0.0 };
        let real = k.c[0] * id + k.c[1] * am[(r, s)] + k.c[2] * a2[(r, s)];
        let imag = k.d[0] * id + k.d[1] * am[(r, s)];
        real + i * imag
    })
}

/// `(A, B)` with full-rank PSD `A` and `B` a seeded complex polynomial in `A`
/// of degree at most two (coefficients uniform in `[-1, 1)`).
pub fn gen_commuting_pair(g: &SeededGenerator) -> (HermitianMatrix, ComplexMatrix) {
    let mut rng = g.stream();
    let a = draw_gram(&mut rng, g.n, g.n);
    let mut coef = || rng.uniform_in(-1.0, 1.0);
    let k = PolynomialCoefficients {
        c: [coef(), coef(), coef()],
        d: [coef(), coef()],
    };
    let b = polynomial_commutant(&a, &k);
    (a, b)
}

/// Estimate of `max |lambda|` by power iteration, independent of the Jacobi
/// solver. Accurate to a few digits, which is all a tolerance scale needs.
pub fn spectral_norm_estimate(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut x: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + 0.37 * k as f64, 0.11 * (k % 5) as f64))
        .collect();
    let norm = vec_norm(&x);
    x.iter_mut().for_each(|z| *z /= norm);
    let mut estimate = 0.0;
    for _ in 0..200 {
        let y = m.mul_vec(&x);
        let next = vec_norm(&y);
        if next == 0.0 {
            return 0.0;
        }
        x = y.into_iter().map(|z| z / next).collect();
        let done = (next - estimate).abs() <= 1e-10 * next;
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// PSD test by brute force over all `2^n - 1` principal minors.
///
/// The matrix is shifted by `psd * max(1, |A|_2)` first (power-iteration
/// norm estimate), so the verdict uses the same tolerance convention as the
/// eigenvalue test while the minors themselves are compared against zero.
pub fn psd_by_minors(a: &HermitianMatrix, tol: &Tolerances) -> Result<bool> {
    let n = a.dim();
    if n > MINORS_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MINORS_MAX_DIM,
        });
    }
    let m = a.as_matrix();
    let shift = tol.psd * 1f64.max(spectral_norm_estimate(m));
    let shifted = m.shifted(shift);
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let sub = ComplexMatrix::from_fn(k, |r, c| shifted[(idx[r], idx[c])]);
        if sub.determinant().re < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut s = SplitMix64::new(0);
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(s.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_range_and_normal_moments() {
        let mut s = SplitMix64::new(42);
        let draws: Vec<f64> = (0..20_000).map(|_| s.normal()).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
        assert!(draws.iter().all(|x| x.abs() <= 6.0));
        let u: Vec<f64> = (0..1000).map(|_| s.uniform()).collect();
        assert!(u.iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn minors_examples() {
        let t = Tolerances::default();
        assert!(psd_by_minors(&HermitianMatrix::identity(3), &t).unwrap());
        let indef = HermitianMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(!psd_by_minors(&indef, &t).unwrap());
        assert!(psd_by_minors(&HermitianMatrix::from_diag(&[1.0, 0.0, 2.0]), &t).unwrap());
        // Leading minors of diag(0, -1) are 0, 0; only the full set of
        // principal minors exposes it.
        assert!(!psd_by_minors(&HermitianMatrix::from_diag(&[0.0, -1.0]), &t).unwrap());
        assert!(matches!(
            psd_by_minors(&HermitianMatrix::identity(13), &t),
            Err(Error::DimensionTooLarge { n: 13, max: 12 })
        ));
    }

    #[test]
    fn psd_generator_contracts() {
        let g = SeededGenerator::new(7, 5);
        assert_eq!(gen_psd(&g, Some(0)), HermitianMatrix::zeros(5));
        assert_eq!(gen_psd(&g, None), gen_psd(&g, None));
        assert_ne!(
            gen_psd(&g, None),
            gen_psd(&SeededGenerator::new(8, 5), None)
        );
        assert!(psd_by_minors(&gen_psd(&g, None), &Tolerances::default()).unwrap());
    }

    #[test]
    fn dominated_pair_boundaries() {
        let g = SeededGenerator::new(3, 4);
        let (a, b) = gen_dominated_pair_with_ranks(&g, 4, 0);
        assert_eq!(a, b);
        let (_, b) = gen_dominated_pair_with_ranks(&g, 0, 4);
        assert_eq!(b, HermitianMatrix::zeros(4));
    }

    #[test]
    fn polynomial_commutant_special_cases() {
        let a = gen_psd(&SeededGenerator::new(1, 3), None);
        let zero = PolynomialCoefficients {
            c: [0.0; 3],
            d: [0.0; 2],
        };
        assert_eq!(polynomial_commutant(&a, &zero), ComplexMatrix::zeros(3));
        let linear = PolynomialCoefficients {
            c: [0.0, 1.0, 0.0],
            d: [0.0; 2],
        };
        assert_eq!(&polynomial_commutant(&a, &linear), a.as_matrix());
    }

    #[test]
    fn unitary_generator_is_unitary() {
        let u = gen_unitary(&SeededGenerator::new(11, 6));
        let gram = &u.adjoint() * &u;
        assert!((&gram - &ComplexMatrix::identity(6)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn power_iteration_matches_known_norm() {
        let m = ComplexMatrix::from_diag(&[1.0, -3.0, 2.0]);
        assert!((spectral_norm_estimate(&m) - 3.0).abs() < 1e-6);
        assert_eq!(spectral_norm_estimate(&ComplexMatrix::zeros(2)), 0.0);
    }
}
