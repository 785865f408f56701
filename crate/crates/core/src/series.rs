//! Formal Fourier series in the circle variable `t` whose coefficients are
//! Laurent polynomials in the torus variables, stored on a finite window of
//! indices.
//!
//! A [`WindowedSeries`] only claims its coefficients inside `window`; nothing
//! is assumed outside. Operations that need values beyond the window shrink
//! the result window instead of padding with zeros, so every stored
//! coefficient is exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{lambda_poly, LaurentPoly};

/// Inclusive index interval `[lo, hi]`. Serialized as `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            Err(Error::EmptyWindow { lo, hi })
        } else {
            Ok(Window { lo, hi })
        }
    }

    /// `[-w, w]`.
    pub fn symmetric(w: i64) -> Self {
        Window { lo: -w.abs(), hi: w.abs() }
    }

    /// `[-W, W]` with `W = 2(n+1) max(1, |k|) + 8`.
    pub fn default_for(n: usize, k: i64) -> Self {
        Self::symmetric(2 * (n as i64 + 1) * k.abs().max(1) + 8)
    }

    pub fn contains(&self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn intersect(&self, other: &Window) -> Result<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            Err(Error::DisjointWindows { a_lo: self.lo, a_hi: self.hi, b_lo: other.lo, b_hi: other.hi })
        } else {
            Ok(Window { lo, hi })
        }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl From<(i64, i64)> for Window {
    fn from((lo, hi): (i64, i64)) -> Self {
        Window { lo, hi }
    }
}

impl From<Window> for (i64, i64) {
    fn from(w: Window) -> Self {
        (w.lo, w.hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = String;

    /// Parses `lo..hi`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
        let lo: i64 = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
        let hi: i64 = b.trim().parse().map_err(|_| format!("bad upper bound `{b}`"))?;
        Window::new(lo, hi).map_err(|e| e.to_string())
    }
}

/// Which Laurent expansion of a rational function in `t` to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    Zero,
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowedSeries {
    rank: usize,
    window: Window,
    coeffs: Vec<LaurentPoly>,
}

impl WindowedSeries {
    pub fn new(rank: usize, window: Window, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::EmptyWindow { lo: window.lo, hi: window.hi });
        }
        assert_eq!(coeffs.len(), window.len(), "one coefficient per window index");
        for c in &coeffs {
            if c.rank() != rank {
                return Err(Error::RankMismatch { left: rank, right: c.rank() });
            }
            assert!(!c.has_circle_terms(), "series coefficients are torus-only");
        }
        Ok(WindowedSeries { rank, window, coeffs })
    }

    pub fn from_fn(rank: usize, window: Window, mut f: impl FnMut(i64) -> LaurentPoly) -> Self {
        let coeffs = window.indices().map(&mut f).collect();
        WindowedSeries::new(rank, window, coeffs).expect("coefficients produced with the declared rank")
    }

    pub fn zero(rank: usize, window: Window) -> Self {
        Self::from_fn(rank, window, |_| LaurentPoly::zero(rank))
    }

    /// The finite series of a Laurent polynomial `sum_b a_b t^b`, read off on
    /// `window`.
    pub fn from_laurent(p: &LaurentPoly, window: Window) -> Self {
        let parts = p.circle_parts();
        Self::from_fn(p.rank(), window, |m| parts.get(&m).cloned().unwrap_or_else(|| LaurentPoly::zero(p.rank())))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// Coefficient of `t^m`: the pairing with the test function `t^{-m}`.
    pub fn coefficient(&self, m: i64) -> Result<&LaurentPoly> {
        if !self.window.contains(m) {
            return Err(Error::OutsideWindow { m, lo: self.window.lo, hi: self.window.hi });
        }
        Ok(&self.coeffs[(m - self.window.lo) as usize])
    }

    fn at(&self, m: i64) -> &LaurentPoly {
        &self.coeffs[(m - self.window.lo) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> {
        self.window.indices().zip(&self.coeffs)
    }

    pub fn restrict(&self, window: Window) -> Result<Self> {
        let w = self.window.intersect(&window)?;
        if w != window {
            return Err(Error::OutsideWindow {
                m: if window.lo < self.window.lo { window.lo } else { window.hi },
                lo: self.window.lo,
                hi: self.window.hi,
            });
        }
        Ok(Self::from_fn(self.rank, w, |m| self.at(m).clone()))
    }

    /// Extends to `window` with zero coefficients. Only sound when the series
    /// is known to vanish on the added indices, e.g. an expansion at `t = 0`
    /// padded below its window.
    pub fn pad_zeros(&self, window: Window) -> Result<Self> {
        if window.lo > self.window.lo || window.hi < self.window.hi {
            return Err(Error::OutsideWindow { m: window.lo, lo: self.window.lo, hi: self.window.hi });
        }
        Ok(Self::from_fn(self.rank, window, |m| {
            if self.window.contains(m) {
                self.at(m).clone()
            } else {
                LaurentPoly::zero(self.rank)
            }
        }))
    }

    pub fn embed(&self, new_rank: usize) -> Self {
        Self::from_fn(new_rank, self.window, |m| self.at(m).embed(new_rank))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let w = self.window.intersect(&other.window)?;
        Ok(Self::from_fn(self.rank, w, |m| f(self.at(m), other.at(m))))
    }

    /// Pointwise sum on the intersection of the windows.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Pointwise difference on the intersection of the windows.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rank, self.window, |m| -self.at(m))
    }

    /// First index of the common window where the two series differ, or
    /// `None` if they agree there. Disjoint windows are an error.
    pub fn first_mismatch(&self, other: &Self) -> Result<Option<i64>> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let w = self.window.intersect(&other.window)?;
        Ok(w.indices().find(|&m| self.at(m) != other.at(m)))
    }

    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_mismatch(other)?.is_none())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let coeffs: Vec<_> = self.coeffs.iter().map(f).collect();
        let rank = coeffs.first().map_or(self.rank, LaurentPoly::rank);
        WindowedSeries::new(rank, self.window, coeffs).expect("mapped coefficients share a rank")
    }
}

/// `p * s` for `p` in `R(T^{n+1} x S^1)`: writing `p = sum_b a_b t^b`, the
/// coefficient at `m` is `sum_b a_b s_{m-b}`. The result window is
/// `[lo + maxdeg_t p, hi + mindeg_t p]`, the largest interval on which every
/// coefficient is determined by `s`.
pub fn module_action(p: &LaurentPoly, s: &WindowedSeries) -> Result<WindowedSeries> {
    if p.rank() != s.rank() {
        return Err(Error::RankMismatch { left: p.rank(), right: s.rank() });
    }
    let Some((bmin, bmax)) = p.circle_degree_range() else {
        return Ok(WindowedSeries::zero(s.rank(), s.window()));
    };
    let window = Window::new(s.window().lo + bmax, s.window().hi + bmin)?;
    let parts = p.circle_parts();
    Ok(WindowedSeries::from_fn(s.rank(), window, |m| {
        let mut acc = LaurentPoly::zero(s.rank());
        for (b, a) in &parts {
            acc += &(a * s.at(m - b));
        }
        acc
    }))
}

/// Cauchy product of two expansions at `t = 0`, i.e. series whose
/// coefficients vanish below their windows. The result also vanishes below
/// its window and is exact on `[a.lo + b.lo, min(a.hi + b.lo, a.lo + b.hi)]`.
pub fn mul_lower_bounded(a: &WindowedSeries, b: &WindowedSeries) -> Result<WindowedSeries> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch { left: a.rank(), right: b.rank() });
    }
    let (aw, bw) = (a.window(), b.window());
    let window = Window::new(aw.lo + bw.lo, (aw.hi + bw.lo).min(aw.lo + bw.hi))?;
    Ok(WindowedSeries::from_fn(a.rank(), window, |m| {
        let mut acc = LaurentPoly::zero(a.rank());
        for p in aw.lo..=m - bw.lo {
            acc += &(a.at(p) * b.at(m - p));
        }
        acc
    }))
}

/// Cauchy product of two expansions at `t = infinity`, i.e. series whose
/// coefficients vanish above their windows. The result also vanishes above
/// its window and is exact on `[max(a.lo + b.hi, a.hi + b.lo), a.hi + b.hi]`.
pub fn mul_upper_bounded(a: &WindowedSeries, b: &WindowedSeries) -> Result<WindowedSeries> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch { left: a.rank(), right: b.rank() });
    }
    let (aw, bw) = (a.window(), b.window());
    let window = Window::new((aw.lo + bw.hi).max(aw.hi + bw.lo), aw.hi + bw.hi)?;
    Ok(WindowedSeries::from_fn(a.rank(), window, |m| {
        let mut acc = LaurentPoly::zero(a.rank());
        for p in m - bw.hi..=aw.hi {
            acc += &(a.at(p) * b.at(m - p));
        }
        acc
    }))
}

/// Laurent expansion of `1 / (1 - a t)` for a unit monomial `a` in the torus
/// variables:
///
/// * at `t = 0`: `1 + a t + a^2 t^2 + ...`
/// * at `t = infinity`: `-(a^{-1} t^{-1} + a^{-2} t^{-2} + ...)`
pub fn geometric_expansion(a: &LaurentPoly, window: Window, at: ExpansionPoint) -> Result<WindowedSeries> {
    let (e, c) = a.as_unit_torus_monomial()?;
    let rank = a.rank();
    let e = e.torus.clone();
    let c_negative = c.is_negative();
    let power = |m: i64| {
        let torus: Vec<i64> = e.iter().map(|x| x * m).collect();
        let sign = if c_negative && m.rem_euclid(2) == 1 { -1 } else { 1 };
        LaurentPoly::monomial(rank, &torus, 0, sign)
    };
    Ok(WindowedSeries::from_fn(rank, window, |m| match at {
        ExpansionPoint::Zero if m >= 0 => power(m),
        ExpansionPoint::Infinity if m <= -1 => -power(m),
        _ => LaurentPoly::zero(rank),
    }))
}

fn factor_monomial(rank: usize, j: usize, k: i64) -> LaurentPoly {
    LaurentPoly::torus_var(rank, j, k)
}

/// `J_0(lambda_{n+1}(k))`: the expansion of `1 / lambda_{n+1}(k)` at `t = 0`,
/// exact on all of `window`.
pub fn j0(n: usize, k: i64, window: Window) -> WindowedSeries {
    let rank = n + 1;
    let top = window.hi.max(0);
    let inner = Window { lo: 0, hi: top };
    let mut acc = WindowedSeries::from_laurent(&LaurentPoly::one(rank), inner);
    for j in 1..=rank {
        let f = geometric_expansion(&factor_monomial(rank, j, k), inner, ExpansionPoint::Zero)
            .expect("t_j^k is a unit monomial");
        acc = mul_lower_bounded(&acc, &f).expect("windows start at 0");
    }
    WindowedSeries::from_fn(rank, window, |m| {
        if m < 0 {
            LaurentPoly::zero(rank)
        } else {
            acc.at(m).clone()
        }
    })
}

/// `J_inf(lambda_{n+1}(k))`: the expansion of `1 / lambda_{n+1}(k)` at
/// `t = infinity`, exact on all of `window`.
pub fn j_inf(n: usize, k: i64, window: Window) -> WindowedSeries {
    let rank = n + 1;
    let bottom = window.lo.min(-1);
    let factor_window = Window { lo: bottom, hi: -1 };
    let mut acc = WindowedSeries::from_laurent(&LaurentPoly::one(rank), Window { lo: bottom, hi: 0 });
    for j in 1..=rank {
        let f = geometric_expansion(&factor_monomial(rank, j, k), factor_window, ExpansionPoint::Infinity)
            .expect("t_j^k is a unit monomial");
        acc = mul_upper_bounded(&acc, &f).expect("windows end at -1");
    }
    // acc vanishes above its window and covers everything down to `bottom`.
    let aw = acc.window();
    WindowedSeries::from_fn(rank, window, |m| if m > aw.hi { LaurentPoly::zero(rank) } else { acc.at(m).clone() })
}

/// `J(lambda_{n+1}(k)) = J_0 - J_inf`.
pub fn j_delta(n: usize, k: i64, window: Window) -> WindowedSeries {
    j0(n, k, window).try_sub(&j_inf(n, k, window)).expect("same rank and window")
}

/// `lambda_{n+1}(k) * J_0`, `lambda_{n+1}(k) * J_inf` and
/// `lambda_{n+1}(k) * J` on their result windows.
pub fn lambda_products(n: usize, k: i64, window: Window) -> Result<[WindowedSeries; 3]> {
    let lambda = lambda_poly(n, k);
    Ok([
        module_action(&lambda, &j0(n, k, window))?,
        module_action(&lambda, &j_inf(n, k, window))?,
        module_action(&lambda, &j_delta(n, k, window))?,
    ])
}

/// True if `s` is the series of the constant 1 on its window.
pub fn is_unit_series(s: &WindowedSeries) -> bool {
    s.iter().all(|(m, c)| if m == 0 { c.is_one() } else { c.is_zero() })
}

/// Substitutes 1 for every torus variable in each coefficient and returns
/// the resulting integer sequence.
pub fn integer_coefficients(s: &WindowedSeries) -> Vec<BigInt> {
    s.coeffs().iter().map(LaurentPoly::at_identity).collect()
}
