//! Equivariant Euler characteristics `chi_{n,l}` of `O(l)` on `CP^n` and the
//! characters of the individual cohomology groups.
//!
//! `chi` uses the closed form; `chi_via_shift` rebuilds the same values from
//! `chi_{0,l} = t1^{-l}` using only the shift relations in the last torus
//! variable, and is kept separate so the two can check each other.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{Exponent, LaurentPoly, TorusExps};

/// Iterates over all `r` in `N^parts` with `r_1 + ... + r_parts = total`,
/// starting from `(total, 0, ..., 0)` and moving units rightwards.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u64>>,
    total: u64,
}

impl Compositions {
    pub fn new(parts: usize, total: u64) -> Self {
        assert!(parts > 0, "compositions need at least one part");
        let mut first = vec![0; parts];
        first[0] = total;
        Compositions { current: Some(first), total }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let last = out.len() - 1;
        if out[last] != self.total {
            let mut r = out.clone();
            let i = (0..last).rev().find(|&i| r[i] > 0).expect("some slot before the last is positive");
            r[i] -= 1;
            let tail = r[last];
            r[last] = 0;
            r[i + 1] = tail + 1;
            self.current = Some(r);
        }
        Some(out)
    }
}

/// `sign * t1^(offset + s*r_1) ... t{rank}^(offset + s*r_rank)` summed over
/// compositions of `total`, where `s` is `+1` or `-1`.
fn composition_sum(rank: usize, total: u64, direction: i64, offset: i64, sign: i64) -> LaurentPoly {
    let terms = Compositions::new(rank, total).map(|r| {
        let torus: TorusExps = r.iter().map(|&x| offset + direction * x as i64).collect();
        (Exponent { circle: 0, torus }, BigInt::from(sign))
    });
    LaurentPoly::from_terms(rank, terms)
}

/// Closed form of `chi_{n,l}` as an element of `R(T^{n+1})`, without caching.
///
/// For `n = 0` this is the convention `chi_{0,l} = t1^{-l}`.
pub fn chi_closed_form(n: usize, l: i64) -> LaurentPoly {
    let rank = n + 1;
    if n == 0 {
        return LaurentPoly::torus_var(1, 1, -l);
    }
    let n_i = n as i64;
    if l >= 0 {
        composition_sum(rank, l as u64, -1, 0, 1)
    } else if l > -n_i - 1 {
        LaurentPoly::zero(rank)
    } else {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        composition_sum(rank, (-l - n_i - 1) as u64, 1, 1, sign)
    }
}

/// Memoized `chi_{n,l}`. Safe to share between threads.
#[derive(Debug, Default)]
pub struct CharacterTable {
    memo: Option<RwLock<HashMap<(usize, i64), LaurentPoly>>>,
}

impl CharacterTable {
    pub fn new() -> Self {
        CharacterTable { memo: Some(RwLock::new(HashMap::new())) }
    }

    /// A table that recomputes every value.
    pub fn uncached() -> Self {
        CharacterTable { memo: None }
    }

    pub fn chi(&self, n: usize, l: i64) -> LaurentPoly {
        let Some(memo) = &self.memo else {
            return chi_closed_form(n, l);
        };
        if let Some(v) = memo.read().unwrap().get(&(n, l)) {
            return v.clone();
        }
        let v = chi_closed_form(n, l);
        memo.write().unwrap().entry((n, l)).or_insert_with(|| v.clone());
        v
    }

    pub fn cached_len(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| m.read().unwrap().len())
    }
}

static GLOBAL_TABLE: LazyLock<CharacterTable> = LazyLock::new(CharacterTable::new);

/// `chi_{n,l}` from the process-wide memo table.
pub fn chi(n: usize, l: i64) -> LaurentPoly {
    GLOBAL_TABLE.chi(n, l)
}

/// `chi_{n,l}` rebuilt level by level from `chi_{0,.}` with the shift
/// relations in `t_{n+1}`:
///
/// * `l >= 0`:  `chi_{n,l} = sum_{i=0}^{l} chi_{n-1,l-i} t_{n+1}^{-i}`
/// * `l <= -2`: `chi_{n,l} = -sum_{i=1}^{-l-1} chi_{n-1,l+i} t_{n+1}^{i}`
/// * `l = -1`:  `chi_{n,-1} = (chi_{n,0} - chi_{n-1,0}) t_{n+1}`
pub fn chi_via_shift(n: usize, l: i64) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let lo = l.min(-1);
    let hi = l.max(0);
    let idx = |m: i64| (m - lo) as usize;

    let mut prev: Vec<LaurentPoly> = (lo..=hi).map(|m| LaurentPoly::torus_var(1, 1, -m)).collect();
    for level in 1..=n {
        let rank = level + 1;
        let below: Vec<LaurentPoly> = prev.iter().map(|p| p.embed(rank)).collect();
        let mut shift = vec![0i64; rank];
        let mut cur = vec![LaurentPoly::zero(rank); below.len()];

        for m in 0..=hi {
            let mut acc = LaurentPoly::zero(rank);
            for i in 0..=m {
                shift[rank - 1] = -i;
                acc = &acc + &below[idx(m - i)].shift(&shift, 0);
            }
            cur[idx(m)] = acc;
        }
        for m in lo..=-2 {
            let mut acc = LaurentPoly::zero(rank);
            for i in 1..=(-m - 1) {
                shift[rank - 1] = i;
                acc = &acc - &below[idx(m + i)].shift(&shift, 0);
            }
            cur[idx(m)] = acc;
        }
        shift[rank - 1] = 1;
        cur[idx(-1)] = (&cur[idx(0)] - &below[idx(0)]).shift(&shift, 0);
        prev = cur;
    }
    Ok(prev.swap_remove(idx(l)))
}

/// Character of `H^q(CP^n, O(m))` as a representation of `T^{n+1}`.
pub fn cohomology_character(n: usize, q: usize, m: i64) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    if q > n {
        return Err(Error::DegreeOutOfRange { q, n });
    }
    let rank = n + 1;
    let n_i = n as i64;
    Ok(if q == 0 {
        if m >= 0 {
            // S^m((C^{n+1})^*)
            composition_sum(rank, m as u64, -1, 0, 1)
        } else {
            LaurentPoly::zero(rank)
        }
    } else if q < n {
        LaurentPoly::zero(rank)
    } else if m <= -n_i - 1 {
        // top exterior power tensor S^{-m-n-1}(C^{n+1})
        composition_sum(rank, (-m - n_i - 1) as u64, 1, 1, 1)
    } else {
        LaurentPoly::zero(rank)
    })
}

/// `dim H^q(CP^n, O(m))`: `binom(m+n, n)` in degree 0 for `m >= 0`,
/// `binom(-m-1, n)` in degree `n` for `m <= -n-1`, zero otherwise.
pub fn dimension(n: usize, q: usize, m: i64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    if q > n {
        return Err(Error::DegreeOutOfRange { q, n });
    }
    let n_i = n as i64;
    Ok(if q == 0 && m >= 0 {
        binomial(m + n_i, n_i)
    } else if q == n && m <= -n_i - 1 {
        binomial(-m - 1, n_i)
    } else {
        BigInt::zero()
    })
}

pub(crate) fn binomial(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 || top < bottom {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..bottom {
        acc = acc * BigInt::from(top - i) / BigInt::from(i + 1);
    }
    acc
}
