//! The fixed-point form of the index: residues at the poles `t = t_i`,
//! computed exactly and numerically, against the Euler characteristic
//! oracle built from the characters `chi_{n,l}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::characters::chi;
use crate::error::{Error, Result};
use crate::laurent::{lambda_poly, LaurentPoly, TorusPoint};

/// Minimum pairwise distance between torus coordinates accepted by the
/// numeric fixed-point sum.
pub const MIN_SEPARATION: f64 = 1e-3;

/// Relative tolerance of the numeric check: `|lhs - rhs| <= tol (1 + |rhs|)`.
pub const NUMERIC_TOL: f64 = 1e-9;

/// A representative in `R(T^{n+1} x S^1)` of a class in the quotient by
/// `lambda_{n+1}(-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KClassRep {
    poly: LaurentPoly,
}

impl KClassRep {
    pub fn new(poly: LaurentPoly) -> Self {
        KClassRep { poly }
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Ok(KClassRep::new(LaurentPoly::parse(text, n + 1)?))
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn rank(&self) -> usize {
        self.poly.rank()
    }

    /// `self + lambda_{n+1}(-1) * q`, another representative of the same class.
    pub fn add_ideal_element(&self, q: &LaurentPoly) -> Result<Self> {
        let lambda = lambda_poly(self.rank() - 1, -1);
        Ok(KClassRep::new(self.poly.try_add(&lambda.try_mul(q)?)?))
    }
}

impl From<LaurentPoly> for KClassRep {
    fn from(poly: LaurentPoly) -> Self {
        KClassRep::new(poly)
    }
}

fn check(n: usize, f: &KClassRep) -> Result<()> {
    if n < 1 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    if f.rank() != n + 1 {
        return Err(Error::RankMismatch { left: n + 1, right: f.rank() });
    }
    Ok(())
}

/// `prod_{a<b, a,b != skip} (t_b - t_a)` over 0-based indices.
fn vandermonde(rank: usize, skip: Option<usize>) -> LaurentPoly {
    let mut out = LaurentPoly::one(rank);
    let idx: Vec<usize> = (0..rank).filter(|&i| Some(i) != skip).collect();
    for (pos, &a) in idx.iter().enumerate() {
        for &b in &idx[pos + 1..] {
            let diff = &LaurentPoly::torus_var(rank, b + 1, 1) - &LaurentPoly::torus_var(rank, a + 1, 1);
            out = &out * &diff;
        }
    }
    out
}

/// `sum_i f|_{t=t_i} / prod_{j != i} (1 - t_j^{-1} t_i)` as a Laurent
/// polynomial.
///
/// With `1 - t_j^{-1} t_i = t_j^{-1} (t_j - t_i)` the `i`-th term is
/// `f_i prod_{j != i} t_j / prod_{j != i} (t_j - t_i)`. Over the common
/// denominator `V = prod_{a<b} (t_b - t_a)` its numerator is
/// `(-1)^i f_i prod_{j != i} t_j V_i`, where `V_i` omits index `i`. The sum of
/// numerators is divided by `V` exactly; an inexact division is an error.
pub fn lefschetz_residue(n: usize, f: &KClassRep) -> Result<LaurentPoly> {
    check(n, f)?;
    let rank = n + 1;
    let mut numerator = LaurentPoly::zero(rank);
    for i in 0..rank {
        let others: Vec<i64> = (0..rank).map(|j| i64::from(j != i)).collect();
        let term = f.poly().substitute_t(i + 1)?.shift(&others, 0);
        let term = &term * &vandermonde(rank, Some(i));
        numerator = if i % 2 == 0 { &numerator + &term } else { &numerator - &term };
    }
    numerator.div_exact(&vandermonde(rank, None))
}

/// The fixed-point sum `sum_i f(t, t_i) / prod_{j != i} (1 - t_j^{-1} t_i)`
/// evaluated in floating point at a torus point.
pub fn fixed_point_eval(n: usize, f: &KClassRep, pt: &TorusPoint) -> Result<Complex64> {
    check(n, f)?;
    if pt.rank() != n + 1 {
        return Err(Error::RankMismatch { left: n + 1, right: pt.rank() });
    }
    let z = pt.coords();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let dist = (z[i] - z[j]).norm();
            if dist < MIN_SEPARATION {
                return Err(Error::CoincidentCoordinates { i: i + 1, j: j + 1, dist });
            }
        }
    }
    let mut total = Complex64::zero();
    for i in 0..z.len() {
        let at_pole = TorusPoint::new(z.to_vec())?.with_circle(z[i])?;
        let value = f.poly().eval_at(&at_pole)?;
        let denom: Complex64 = (0..z.len()).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) - z[i] / z[j]).product();
        total += value / denom;
    }
    Ok(total)
}

/// `sum_b a_b chi_{n,-b}` for `f = sum_b a_b t^b`.
pub fn euler_characteristic(n: usize, f: &KClassRep) -> Result<LaurentPoly> {
    check(n, f)?;
    Ok(f.poly()
        .circle_parts()
        .iter()
        .fold(LaurentPoly::zero(n + 1), |acc, (b, a)| &acc + &(a * &chi(n, -b))))
}

/// A point of `T^{n+1}` with coordinates drawn uniformly on the circle from a
/// seeded generator, redrawn until pairwise distances are at least
/// [`MIN_SEPARATION`].
pub fn random_torus_point(n: usize, seed: u64) -> TorusPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let angles: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.0..TAU)).collect();
        let pt = TorusPoint::from_angles(&angles);
        let z = pt.coords();
        let separated = (0..z.len()).all(|i| (i + 1..z.len()).all(|j| (z[i] - z[j]).norm() >= MIN_SEPARATION));
        if separated {
            return pt;
        }
    }
}

/// A random polynomial of rank `n + 1` with one to `max_terms` terms, every
/// exponent (torus and circle) in `-max_exp..=max_exp` and nonzero
/// coefficients in `-5..=5`.
pub fn random_poly(n: usize, max_terms: usize, max_exp: i64, rng: &mut impl Rng) -> LaurentPoly {
    let rank = n + 1;
    let count = rng.gen_range(1..=max_terms);
    let mut out = LaurentPoly::zero(rank);
    for _ in 0..count {
        let torus: Vec<i64> = (0..rank).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
        let circle = rng.gen_range(-max_exp..=max_exp);
        let mut c = rng.gen_range(-5..=4i64);
        if c >= 0 {
            c += 1;
        }
        out = &out + &LaurentPoly::monomial(rank, &torus, circle, c);
    }
    out
}

/// The class representatives used by the equivalence sweep for a given `n`:
/// the monomials `t^b` for `b` in `-6..=6`, `lambda_{n+1}(-1)`, and `random`
/// seeded random polynomials with at most four terms and exponents in
/// `-3..=3`.
pub fn sweep_representatives(n: usize, random: usize, seed: u64) -> Vec<(String, KClassRep)> {
    let rank = n + 1;
    let mut out: Vec<(String, KClassRep)> =
        (-6..=6).map(|b| (format!("t^{b}"), KClassRep::new(LaurentPoly::circle_var(rank, b)))).collect();
    out.push(("lambda(-1)".to_string(), KClassRep::new(lambda_poly(n, -1))));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for _ in 0..random {
        let f = random_poly(n, 4, 3, &mut rng);
        out.push((f.to_string(), KClassRep::new(f)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCheck {
    pub seed: u64,
    /// Coordinates as `[re, im]` pairs.
    pub point: Vec<[f64; 2]>,
    /// Floating-point fixed-point sum.
    pub lhs: [f64; 2],
    /// Exact residue result evaluated at the point.
    pub rhs: [f64; 2],
    pub abs_err: f64,
}

impl NumericCheck {
    pub fn compute(n: usize, f: &KClassRep, exact: &LaurentPoly, seed: u64) -> Result<Self> {
        let pt = random_torus_point(n, seed);
        let lhs = fixed_point_eval(n, f, &pt)?;
        let rhs = exact.eval_at(&pt)?;
        Ok(NumericCheck {
            seed,
            point: pt.coords().iter().map(|z| [z.re, z.im]).collect(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_err: (lhs - rhs).norm(),
        })
    }

    pub fn passes(&self) -> bool {
        let rhs = Complex64::new(self.rhs[0], self.rhs[1]);
        self.abs_err <= NUMERIC_TOL * (1.0 + rhs.norm())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LefschetzReport {
    pub n: usize,
    pub f: LaurentPoly,
    pub residue_result: LaurentPoly,
    pub euler_result: LaurentPoly,
    pub equal: bool,
    pub numeric_checks: Vec<NumericCheck>,
}

impl LefschetzReport {
    /// Runs both exact paths and `points` numeric checks with seeds
    /// `seed, seed + 1, ...`.
    pub fn compute(n: usize, f: &KClassRep, points: usize, seed: u64) -> Result<Self> {
        let residue_result = lefschetz_residue(n, f)?;
        let euler_result = euler_characteristic(n, f)?;
        let numeric_checks = (0..points as u64)
            .map(|i| NumericCheck::compute(n, f, &residue_result, seed.wrapping_add(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LefschetzReport {
            n,
            f: f.poly().clone(),
            equal: residue_result == euler_result,
            residue_result,
            euler_result,
            numeric_checks,
        })
    }
}
