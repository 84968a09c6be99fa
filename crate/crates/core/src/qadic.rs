//! q-adic digits of exponents and the exponent bookkeeping for `1 + tr(X^b)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::{checked_pow, prime_power};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QAdicExpansion {
    /// Least significant digit first.
    pub digits: Vec<u64>,
    pub q: u64,
    pub value: u64,
}

impl QAdicExpansion {
    pub fn reconstruct(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.q + d)
    }
}

pub fn expand(k: u64, q: u64, width: u32) -> Result<QAdicExpansion> {
    if q < 2 {
        return Err(Error::OutOfRange {
            what: "q-adic base",
            value: q,
        });
    }
    if let Some(limit) = q.checked_pow(width) {
        if k >= limit {
            return Err(Error::OutOfRange {
                what: "exponent for q-adic width",
                value: k,
            });
        }
    }
    let mut digits = Vec::with_capacity(width as usize);
    let mut r = k;
    for _ in 0..width {
        digits.push(r % q);
        r /= q;
    }
    Ok(QAdicExpansion {
        digits,
        q,
        value: k,
    })
}

/// `q^{2n} - 1`, the order of the multiplicative group of GF(q^{2n}).
pub fn group_order(q: u64, n: u32) -> Result<u64> {
    Ok(checked_pow(q, 2 * n, "q^(2n)")? - 1)
}

/// `{q^s · b mod N : 0 <= s < 2n}` in order of first appearance, `N = q^{2n} - 1`.
pub fn shift_orbit(b: u64, q: u64, n: u32) -> Result<Vec<u64>> {
    let big_n = group_order(q, n)?;
    if b == 0 || b >= big_n {
        return Err(Error::OutOfRange {
            what: "shift orbit seed",
            value: b,
        });
    }
    let mut out = Vec::new();
    let mut x = b;
    for _ in 0..2 * n {
        if !out.contains(&x) {
            out.push(x);
        }
        x = ((x as u128 * q as u128) % big_n as u128) as u64;
    }
    Ok(out)
}

/// Canonical representative of an exponent acting on nonzero points:
/// 0 stays 0, anything else lands in `[1, N]`.
pub fn reduce_exponent(e: u64, big_n: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % big_n + 1
    }
}

/// Parameters of `Tr_b` for the triple `(q, n, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrbParams {
    pub q: u64,
    pub n: u32,
    pub t: u32,
    /// `1 + q^t`.
    pub b: u64,
    /// `q^{2n-1-t} + q^{2n-1}`, the degree.
    pub m: u64,
    /// `q^{2n} - 1`.
    pub big_n: u64,
}

pub fn trb_params(q: u64, n: u32, t: u32) -> Result<TrbParams> {
    prime_power(q)?;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n",
            value: 0,
        });
    }
    if t == 0 || t > n {
        return Err(Error::OutOfRange {
            what: "t must satisfy 0 < t <= n",
            value: t as u64,
        });
    }
    let b = checked_pow(q, t, "q^t")? + 1;
    let m = checked_pow(q, 2 * n - 1 - t, "q^(2n-1-t)")?
        .checked_add(checked_pow(q, 2 * n - 1, "q^(2n-1)")?)
        .ok_or(Error::Overflow("degree m"))?;
    Ok(TrbParams {
        q,
        n,
        t,
        b,
        m,
        big_n: group_order(q, n)?,
    })
}

/// Recovers `t` from `b = 1 + q^t`.
pub fn t_from_b(q: u64, n: u32, b: u64) -> Result<u32> {
    (1..=n)
        .find(|&t| q.checked_pow(t).map(|x| x + 1) == Some(b))
        .ok_or(Error::OutOfRange {
            what: "b is not 1 + q^t with 0 < t <= n",
            value: b,
        })
}

pub fn trb_degree(q: u64, n: u32, t: u32) -> Result<u64> {
    Ok(trb_params(q, n, t)?.m)
}

/// Exponents carrying a nonzero coefficient in `Tr_b`.
pub fn support_of_trb(q: u64, n: u32, t: u32) -> Result<BTreeSet<u64>> {
    let pr = trb_params(q, n, t)?;
    let mut s = BTreeSet::from([0u64]);
    for j in 0..=(2 * n - t - 1) {
        s.insert(checked_pow(q, j, "q^j")? * pr.b);
    }
    if t < n {
        let tail = 1 + checked_pow(q, 2 * n - t, "q^(2n-t)")?;
        for j in 1..=t {
            s.insert(checked_pow(q, j - 1, "q^(j-1)")? * tail);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exponents of `1 + Σ_{j<len} X^{b q^j}` reduced modulo `X^N - 1`, keeping
    /// nonzero exponents in `[1, N]`, by dense coefficient accumulation.
    fn dense_support(q: u64, n: u32, t: u32) -> BTreeSet<u64> {
        let p = prime_power(q).unwrap().0 as u64;
        let big_n = group_order(q, n).unwrap();
        let len = if t == n { n } else { 2 * n };
        let b = q.pow(t) + 1;
        let mut coeff = vec![0u64; big_n as usize + 1];
        coeff[0] = 1;
        let mut e = b as u128;
        for _ in 0..len {
            let r = (e - 1) % big_n as u128 + 1;
            coeff[r as usize] = (coeff[r as usize] + 1) % p;
            e *= q as u128;
        }
        coeff
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i as u64)
            .collect()
    }

    #[test]
    fn expansions() {
        assert_eq!(expand(0, 2, 4).unwrap().digits, vec![0, 0, 0, 0]);
        assert_eq!(expand(9, 2, 4).unwrap().digits, vec![1, 0, 0, 1]);
        assert_eq!(expand(10, 3, 4).unwrap().digits, vec![1, 0, 1, 0]);
        assert!(expand(16, 2, 4).is_err());
    }

    #[test]
    fn orbits() {
        assert_eq!(shift_orbit(3, 2, 2).unwrap(), vec![3, 6, 12, 9]);
        let o = shift_orbit(5, 2, 4).unwrap();
        assert_eq!(o.len(), 8);
        assert_eq!(*o.iter().max().unwrap(), 160);
        assert!(shift_orbit(0, 2, 2).is_err());
    }

    #[test]
    fn supports() {
        assert_eq!(
            support_of_trb(2, 2, 1).unwrap(),
            BTreeSet::from([0, 3, 6, 9, 12])
        );
        assert_eq!(support_of_trb(2, 2, 2).unwrap(), BTreeSet::from([0, 5, 10]));
        assert_eq!(*support_of_trb(3, 2, 1).unwrap().iter().max().unwrap(), 36);
        assert!(support_of_trb(2, 2, 3).is_err());
        assert!(support_of_trb(6, 2, 1).is_err());
    }

    #[test]
    fn support_matches_dense_reduction() {
        for (q, n) in [
            (2u64, 2u32),
            (2, 3),
            (2, 4),
            (3, 2),
            (3, 3),
            (4, 2),
            (5, 2),
            (7, 2),
            (2, 5),
            (4, 3),
            (3, 4),
            (2, 6),
        ] {
            if q.pow(2 * n) > 1 << 20 {
                continue;
            }
            for t in 1..=n {
                assert_eq!(
                    support_of_trb(q, n, t).unwrap(),
                    dense_support(q, n, t),
                    "({q},{n},{t})"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn expansion_reconstructs(k in 0u64..1_000_000, q in 2u64..12) {
            let e = expand(k, q, 20).unwrap();
            prop_assert_eq!(e.reconstruct(), k);
            prop_assert!(e.digits.iter().all(|&d| d < q));
        }

        #[test]
        fn support_size_and_max(qi in 0usize..6, n in 1u32..5, t_raw in 0u32..5) {
            let q = [2u64, 3, 4, 5, 7, 8][qi];
            let t = t_raw % n + 1;
            let s = support_of_trb(q, n, t).unwrap();
            let expected = if t < n { 2 * n + 1 } else { n + 1 } as usize;
            prop_assert_eq!(s.len(), expected);
            let m = q.pow(2 * n - 1 - t) + q.pow(2 * n - 1);
            prop_assert_eq!(*s.iter().max().unwrap(), m);
            prop_assert_eq!(trb_degree(q, n, t).unwrap(), m);
        }
    }
}
