//! The polynomials `A_{n,k}^j` and `B_{n,k}^j` and the two constructions of
//! the index series `sum_m chi_{n,-km} t^m` of the lifted Dolbeault operator.

use serde::{Deserialize, Serialize};

use crate::characters::chi;
use crate::error::{Error, Result};
use crate::laurent::{elementary_symmetric, LaurentPoly};
use crate::series::{j0, j_delta, j_inf, module_action, mul_lower_bounded, mul_upper_bounded};
use crate::series::{geometric_expansion, ExpansionPoint, Window, WindowedSeries};

/// Largest admissible `j` for a given `k`: `max(0, |k| - 1)`.
pub fn max_j(k: i64) -> i64 {
    (k.abs() - 1).max(0)
}

fn check_j(k: i64, j: i64) -> Result<()> {
    if j < 0 || j > max_j(k) {
        return Err(Error::JOutOfRange { j, k, max: max_j(k) });
    }
    Ok(())
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `B_{n,k}^j = sum_{l=0}^n (sum_{i=1}^{n+1-l} (-1)^{i+l+1} chi_{n,ik+j} s_{i+l}(t^k)) t^l`.
pub fn b_poly(n: usize, k: i64, j: i64) -> Result<LaurentPoly> {
    check_j(k, j)?;
    let rank = n + 1;
    let mut out = LaurentPoly::zero(rank);
    for l in 0..=n {
        let mut c = LaurentPoly::zero(rank);
        for i in 1..=(n + 1 - l) {
            let term = &chi(n, i as i64 * k + j) * &elementary_symmetric(rank, i + l, k);
            c = if sign((i + l + 1) as i64) > 0 { &c + &term } else { &c - &term };
        }
        out = &out + &c.shift_circle(l as i64);
    }
    Ok(out)
}

/// `B_{n,k}^j` via `sum_l (sum_{a=0}^l (-1)^a chi_{n,(a-l)k+j} s_a(t^k)) t^l`.
pub fn b_poly_alt(n: usize, k: i64, j: i64) -> Result<LaurentPoly> {
    check_j(k, j)?;
    let rank = n + 1;
    let mut out = LaurentPoly::zero(rank);
    for l in 0..=n {
        let mut c = LaurentPoly::zero(rank);
        for a in 0..=l {
            let term = &chi(n, (a as i64 - l as i64) * k + j) * &elementary_symmetric(rank, a, k);
            c = if a % 2 == 0 { &c + &term } else { &c - &term };
        }
        out = &out + &c.shift_circle(l as i64);
    }
    Ok(out)
}

/// All of `A_{n,k}^0, ..., A_{n,k}^{|k|-1}` built from the recurrences
/// starting at `A_{0,k}^j = t_1^{-j}`:
///
/// * `A_n^0 = A_{n-1}^0 + sum_{j=1}^{|k|-1} A_{n-1}^j t_{n+1}^{k+j} t`
/// * `A_n^j = (1 - t_{n+1}^k t) A_{n-1}^j + t_{n+1}^{-1} A_n^{j-1}`
pub fn a_polys(n: usize, k: i64) -> Result<Vec<LaurentPoly>> {
    if k >= 0 {
        return Err(Error::NonNegativeK(k));
    }
    let width = k.unsigned_abs() as usize;
    let mut level: Vec<LaurentPoly> = (0..width).map(|j| LaurentPoly::torus_var(1, 1, -(j as i64))).collect();
    for lev in 1..=n {
        let rank = lev + 1;
        let below: Vec<LaurentPoly> = level.iter().map(|a| a.embed(rank)).collect();
        let t = LaurentPoly::circle_var(rank, 1);
        let mut cur: Vec<LaurentPoly> = Vec::with_capacity(width);
        let mut a0 = below[0].clone();
        for (j, a) in below.iter().enumerate().skip(1) {
            let factor = &LaurentPoly::torus_var(rank, rank, k + j as i64) * &t;
            a0 = &a0 + &(a * &factor);
        }
        cur.push(a0);
        let damp = &LaurentPoly::one(rank) - &(&LaurentPoly::torus_var(rank, rank, k) * &t);
        let down = LaurentPoly::torus_var(rank, rank, -1);
        for j in 1..width {
            let aj = &(&damp * &below[j]) + &(&down * &cur[j - 1]);
            cur.push(aj);
        }
        level = cur;
    }
    Ok(level)
}

/// `A_{n,k}^j` for `k < 0` and `0 <= j <= |k| - 1`, from the recurrences
/// only.
pub fn a_poly(n: usize, k: i64, j: i64) -> Result<LaurentPoly> {
    if k >= 0 {
        return Err(Error::NonNegativeK(k));
    }
    check_j(k, j)?;
    Ok(a_polys(n, k)?.swap_remove(j as usize))
}

/// `sum_m chi_{n,-km} t^m` on `window`.
pub fn index_series_direct(n: usize, k: i64, window: Window) -> WindowedSeries {
    WindowedSeries::from_fn(n + 1, window, |m| chi(n, -k * m))
}

/// `b * J(lambda_{n+1}(k))` on exactly `window`. The expansion is computed on
/// a window widened by the `t`-degree range of `b`.
pub fn formula_series(b: &LaurentPoly, n: usize, k: i64, window: Window) -> Result<WindowedSeries> {
    let (bmin, bmax) = b.circle_degree_range().unwrap_or((0, 0));
    let wide = Window::new(window.lo - bmax, window.hi - bmin)?;
    module_action(b, &j_delta(n, k, wide))
}

/// `B_{n,k}^0 * J(lambda_{n+1}(k))` on `window`.
pub fn index_series_formula(n: usize, k: i64, window: Window) -> Result<WindowedSeries> {
    formula_series(&b_poly(n, k, 0)?, n, k, window)
}

/// Which half of the index series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    /// `m >= 0`
    NonNeg,
    /// `m < 0`
    Neg,
}

/// `sum_{m >= 0} chi_{n,-km+j} t^m` or `sum_{m < 0} chi_{n,-km+j} t^m`,
/// read on `window`.
pub fn half_series(n: usize, k: i64, j: i64, half: Half, window: Window) -> Result<WindowedSeries> {
    check_j(k, j)?;
    Ok(one_sided_sum(n, k, j, half, window))
}

fn one_sided_sum(n: usize, k: i64, j: i64, half: Half, window: Window) -> WindowedSeries {
    WindowedSeries::from_fn(n + 1, window, |m| {
        let inside = match half {
            Half::NonNeg => m >= 0,
            Half::Neg => m < 0,
        };
        if inside {
            chi(n, -k * m + j)
        } else {
            LaurentPoly::zero(n + 1)
        }
    })
}

/// `B_{n,k}^j J_0` for the non-negative half and `-B_{n,k}^j J_inf` for the
/// negative half, on `window`.
pub fn half_series_formula(n: usize, k: i64, j: i64, half: Half, window: Window) -> Result<WindowedSeries> {
    let b = b_poly(n, k, j)?;
    let (bmin, bmax) = b.circle_degree_range().unwrap_or((0, 0));
    let wide = Window::new(window.lo - bmax, window.hi - bmin)?;
    match half {
        Half::NonNeg => module_action(&b, &j0(n, k, wide)),
        Half::Neg => Ok(module_action(&b, &j_inf(n, k, wide))?.neg()),
    }
}

/// Both sides of the recurrence expressing the level-`n` one-sided sums
/// through level `n - 1`, for `k < 0` and `n >= 1`. With `G` the expansion of
/// `1 / (1 - t_{n+1}^k t)` at `t = 0` (non-negative half) or `t = infinity`
/// (negative half) and `S_j` the level `n - 1` sum for `j`, the returned
/// series are, in order:
///
/// 1. the level `n` sum itself,
/// 2. `S_0 + (sum_{j=0}^{|k|-1} S_j t_{n+1}^{k+j} t) G`,
/// 3. `((1 - t_{n+1}^k t) S_0 + sum_{j=0}^{|k|-1} S_j t_{n+1}^{k+j} t) G`,
/// 4. `(S_0 + sum_{j=1}^{|k|-1} S_j t_{n+1}^{k+j} t) G`.
///
/// All four are read on `[0, w]` or `[-w, -1]`.
pub fn sum_recurrence_sides(n: usize, k: i64, half: Half, w: i64) -> Result<[WindowedSeries; 4]> {
    if k >= 0 {
        return Err(Error::NonNegativeK(k));
    }
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let rank = n + 1;
    let width = k.unsigned_abs() as i64;
    let target = match half {
        Half::NonNeg => Window::new(0, w)?,
        Half::Neg => Window::new(-w, -1)?,
    };
    // One extra index on each side so that multiplying by `t` keeps the
    // target window covered.
    let source = Window::new(target.lo - 1, target.hi + 1)?;
    let lhs = one_sided_sum(n, k, 0, half, target);
    let lower: Vec<WindowedSeries> = (0..width).map(|j| one_sided_sum(n - 1, k, j, half, source).embed(rank)).collect();
    let t = LaurentPoly::circle_var(rank, 1);
    let shifted = |j: i64| module_action(&(&LaurentPoly::torus_var(rank, rank, k + j) * &t), &lower[j as usize]);
    let g_window = match half {
        Half::NonNeg => Window::new(0, w + 1)?,
        Half::Neg => Window::new(-w - 1, -1)?,
    };
    let point = match half {
        Half::NonNeg => ExpansionPoint::Zero,
        Half::Neg => ExpansionPoint::Infinity,
    };
    let g = geometric_expansion(&LaurentPoly::torus_var(rank, rank, k), g_window, point)?;
    let one_sided = |s: WindowedSeries| -> Result<WindowedSeries> {
        match half {
            Half::NonNeg => {
                let lo = s.window().lo.min(0);
                mul_lower_bounded(&s.pad_zeros(Window::new(lo, s.window().hi)?)?, &g)
            }
            Half::Neg => {
                let hi = s.window().hi.max(0);
                mul_upper_bounded(&s.pad_zeros(Window::new(s.window().lo, hi)?)?, &g)
            }
        }
    };
    let sum_from = |start: i64| -> Result<WindowedSeries> {
        let mut acc = shifted(start)?;
        for j in start + 1..width {
            acc = acc.try_add(&shifted(j)?)?;
        }
        Ok(acc)
    };
    let fit = |s: WindowedSeries| -> Result<WindowedSeries> {
        let wide = Window::new(s.window().lo.min(target.lo), s.window().hi.max(target.hi))?;
        s.pad_zeros(wide)?.restrict(target)
    };

    let first = lower[0].try_add(&fit(one_sided(sum_from(0)?)?)?)?.restrict(target)?;

    let damp = &LaurentPoly::one(rank) - &(&LaurentPoly::torus_var(rank, rank, k) * &t);
    let damped = module_action(&damp, &lower[0])?;
    let second = fit(one_sided(damped.try_add(&sum_from(0)?)?)?)?;

    let third = if width >= 2 {
        let inner = lower[0].try_add(&sum_from(1)?)?;
        fit(one_sided(inner)?)?
    } else {
        fit(one_sided(lower[0].clone())?)?
    };
    Ok([lhs, first, second, third])
}

/// Comparison of the two constructions of the index series on one window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexSeriesReport {
    pub n: usize,
    pub k: i64,
    pub window: Window,
    #[serde(rename = "match")]
    pub matches: bool,
    pub first_mismatch: Option<i64>,
    pub direct: WindowedSeries,
    pub formula: WindowedSeries,
}

impl IndexSeriesReport {
    pub fn compute(n: usize, k: i64, window: Window) -> Result<Self> {
        Self::from_b(&b_poly(n, k, 0)?, n, k, window)
    }

    /// Same as [`IndexSeriesReport::compute`] with a caller-supplied `B`.
    pub fn from_b(b: &LaurentPoly, n: usize, k: i64, window: Window) -> Result<Self> {
        let direct = index_series_direct(n, k, window);
        let formula = formula_series(b, n, k, window)?;
        let first_mismatch = direct.first_mismatch(&formula)?;
        Ok(IndexSeriesReport { n, k, window, matches: first_mismatch.is_none(), first_mismatch, direct, formula })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::chi;

    fn p(s: &str, rank: usize) -> LaurentPoly {
        LaurentPoly::parse(s, rank).unwrap()
    }

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn b_examples() {
        for n in 0..5 {
            assert!(b_poly(n, -1, 0).unwrap().is_one());
            let one_minus_t = p("1 - t", n + 1);
            assert_eq!(b_poly(n, 0, 0).unwrap(), one_minus_t.pow(n as u32));
        }
        for k in -4..=4i64 {
            for j in 0..=max_j(k) {
                assert_eq!(b_poly(0, k, j).unwrap(), LaurentPoly::torus_var(1, 1, -j));
            }
        }
        assert_eq!(b_poly(1, -2, 0).unwrap(), p("1 + t1^-1*t2^-1*t", 2));
    }

    #[test]
    fn b_rejects_bad_j() {
        assert_eq!(b_poly(1, -2, 2), Err(Error::JOutOfRange { j: 2, k: -2, max: 1 }));
        assert!(b_poly(1, 0, 1).is_err());
        assert!(b_poly(1, 3, -1).is_err());
        assert!(b_poly_alt(1, 1, 1).is_err());
    }

    #[test]
    fn b_degree_bound() {
        for n in 0..4 {
            for k in -3..=3 {
                for j in 0..=max_j(k) {
                    let b = b_poly(n, k, j).unwrap();
                    let (lo, hi) = b.circle_degree_range().unwrap();
                    assert!(lo >= 0 && hi <= n as i64);
                }
            }
        }
    }

    #[test]
    fn a_examples() {
        for k in -4..=-1i64 {
            for j in 0..=max_j(k) {
                assert_eq!(a_poly(0, k, j).unwrap(), LaurentPoly::torus_var(1, 1, -j));
            }
        }
        for n in 0..5 {
            assert!(a_poly(n, -1, 0).unwrap().is_one());
        }
        let expect = &(&p("1 - t2^-2*t", 2) * &p("t1^-1", 2)) + &(&p("t2^-1", 2) * &p("1 + t1^-1*t2^-1*t", 2));
        assert_eq!(a_poly(1, -2, 1).unwrap(), expect);
        assert_eq!(expect, p("t1^-1 + t2^-1", 2));
    }

    #[test]
    fn a_rejects_non_negative_k() {
        assert_eq!(a_poly(1, 0, 0), Err(Error::NonNegativeK(0)));
        assert_eq!(a_poly(1, 2, 0), Err(Error::NonNegativeK(2)));
        assert!(a_poly(1, -2, 2).is_err());
    }

    #[test]
    fn a_equals_b() {
        for n in 0..4 {
            for k in -4..=-1 {
                for j in 0..=max_j(k) {
                    assert_eq!(a_poly(n, k, j).unwrap(), b_poly(n, k, j).unwrap(), "n={n} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn direct_examples() {
        let s = index_series_direct(1, -1, w(-3, 3));
        assert_eq!(s.coefficient(1).unwrap(), &p("t1^-1 + t2^-1", 2));
        assert!(index_series_direct(2, 1, w(-3, 3)).coefficient(1).unwrap().is_zero());
        for n in 1..4 {
            for k in -3..=3 {
                assert!(index_series_direct(n, k, w(-2, 2)).coefficient(0).unwrap().is_one());
            }
        }
    }

    #[test]
    fn formula_examples() {
        let win = w(-6, 6);
        let s = index_series_formula(1, -1, win).unwrap();
        assert_eq!(s.window(), win);
        for m in -6..=6 {
            assert_eq!(s.coefficient(m).unwrap(), &chi(1, m));
        }
        assert!(index_series_formula(1, 0, win).unwrap().coeffs().iter().all(LaurentPoly::is_one));
        assert_eq!(index_series_formula(2, 2, win).unwrap().coefficient(-2).unwrap(), &chi(2, 4));
    }

    #[test]
    fn main_identity_small() {
        for n in 1..3 {
            for k in -2..=2 {
                let r = IndexSeriesReport::compute(n, k, w(-8, 8)).unwrap();
                assert!(r.matches, "n={n} k={k} first mismatch {:?}", r.first_mismatch);
            }
        }
    }

    #[test]
    fn main_identity_holds_at_n_zero() {
        for k in -4..=4 {
            let r = IndexSeriesReport::compute(0, k, w(-10, 10)).unwrap();
            assert!(r.matches, "k={k}");
        }
    }

    #[test]
    fn flipped_b_is_caught() {
        let b = -b_poly(1, -2, 0).unwrap();
        let r = IndexSeriesReport::from_b(&b, 1, -2, w(-5, 5)).unwrap();
        assert!(!r.matches);
        assert_eq!(r.first_mismatch, Some(-5));
    }

    #[test]
    fn half_examples() {
        let win = w(-5, 5);
        for n in 0..3 {
            assert_eq!(half_series(n, -1, 0, Half::NonNeg, win).unwrap(), j0(n, -1, win));
            for k in -2..=2 {
                let s = half_series(n, k, 0, Half::Neg, win).unwrap();
                assert!((0..=5).all(|m| s.coefficient(m).unwrap().is_zero()));
            }
        }
        let lhs = half_series(0, -2, 1, Half::NonNeg, win).unwrap();
        let rhs = module_action(&LaurentPoly::torus_var(1, 1, -1), &j0(0, -2, win)).unwrap();
        assert_eq!(lhs, rhs);
        assert!(half_series(1, -2, 3, Half::Neg, win).is_err());
    }

    #[test]
    fn halves_match_formula() {
        let win = w(-7, 7);
        for n in 0..3 {
            for k in -3..=3 {
                for j in 0..=max_j(k) {
                    for half in [Half::NonNeg, Half::Neg] {
                        let a = half_series(n, k, j, half, win).unwrap();
                        let b = half_series_formula(n, k, j, half, win).unwrap();
                        assert_eq!(a, b, "n={n} k={k} j={j} {half:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sum_recurrence() {
        for n in 1..3 {
            for k in -3..=-1 {
                for half in [Half::NonNeg, Half::Neg] {
                    let [lhs, a, b, c] = sum_recurrence_sides(n, k, half, 8).unwrap();
                    assert_eq!(lhs, a, "n={n} k={k} {half:?}");
                    assert_eq!(lhs, b, "n={n} k={k} {half:?}");
                    assert_eq!(lhs, c, "n={n} k={k} {half:?}");
                }
            }
        }
    }

    #[test]
    fn report_json_keys_in_order() {
        let r = IndexSeriesReport::compute(1, 2, w(-1, 1)).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let keys = ["\"n\"", "\"k\"", "\"window\"", "\"match\"", "\"first_mismatch\"", "\"direct\"", "\"formula\""];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|p| p[0] < p[1]), "{json}");
    }
}
