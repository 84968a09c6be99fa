//! Power sums of the roots of a trace-depending polynomial, Newton's identities,
//! and the closed-form locations of the nonzero power sums below the degree.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::qadic::trb_params;
use crate::tracepoly::TraceDepPoly;

/// Largest group order for which every residue class is materialized.
pub const FULL_TABLE_LIMIT: u64 = 1 << 16;

/// `s_i = Σ_j β_j^i` over the roots `β_j`.
#[derive(Clone, Debug)]
pub struct PowerSumTable {
    field: Arc<FieldCtx>,
    root_logs: Vec<u32>,
    big_n: u64,
    /// `s_i` for `0 <= i < len`; indices are residues mod `N` when the table is full.
    values: Vec<u32>,
    full: bool,
}

impl PowerSumTable {
    /// Builds a table from discrete logs of the evaluation points.
    pub fn from_root_logs(field: Arc<FieldCtx>, root_logs: Vec<u32>, up_to: u64) -> Self {
        let big_n = field.n_units() as u64;
        let full = big_n <= FULL_TABLE_LIMIT;
        let len = if full { big_n } else { up_to.min(big_n) + 1 };
        let f = &*field;
        let values: Vec<u32> = (0..len)
            .into_par_iter()
            .map(|i| sum_powers(f, &root_logs, i, big_n))
            .collect();
        PowerSumTable {
            field,
            root_logs,
            big_n,
            values,
            full,
        }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn num_roots(&self) -> usize {
        self.root_logs.len()
    }

    /// `s_i` for any `i >= 0`; `s_0 = s_N` is the root count in GF(p).
    pub fn s(&self, i: u64) -> u32 {
        let r = i % self.big_n;
        if (r as usize) < self.values.len() {
            self.values[r as usize]
        } else {
            sum_powers(&self.field, &self.root_logs, r, self.big_n)
        }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// `(i, s_i)` for `1 <= i <= bound` with `s_i != 0`.
    pub fn nonzero_indices(&self, bound: u64) -> Vec<(u64, u32)> {
        (1..=bound)
            .into_par_iter()
            .filter_map(|i| Some((i, self.s(i))).filter(|x| x.1 != 0))
            .collect()
    }
}

fn sum_powers(f: &FieldCtx, logs: &[u32], i: u64, big_n: u64) -> u32 {
    let i = i % big_n;
    logs.iter()
        .fold(0, |acc, &l| f.add(acc, f.exp((l as u64 * i) % big_n)))
}

/// Power sums of the enumerated roots of `poly`, materialized through `up_to`.
pub fn power_sums(poly: &TraceDepPoly, up_to: u64) -> Result<PowerSumTable> {
    let roots = poly
        .roots_raw()
        .ok_or_else(|| Error::Internal("roots must be enumerated before power sums".into()))?;
    let logs = roots
        .iter()
        .map(|&r| poly.field.log(r).expect("roots are nonzero"))
        .collect();
    Ok(PowerSumTable::from_root_logs(
        poly.field.clone(),
        logs,
        up_to,
    ))
}

/// Predicted sign of a nonzero power sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn alternating(even: bool) -> Self {
        if even {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// The field value `±1`.
    pub fn value(self, f: &FieldCtx) -> u32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => f.from_int(-1),
        }
    }
}

/// Closed-form list of the indices `1 <= i <= m` with `s_i != 0` for `Tr_b`,
/// with the sign of `s_i`, in increasing order.
pub fn predict_el7(q: u64, n: u32, t: u32) -> Result<Vec<(u64, Sign)>> {
    let pr = trb_params(q, n, t)?;
    let m = pr.m;
    let pw = |e: u32| q.pow(e);
    let mut out: Vec<(u64, Sign)> = Vec::new();
    if t == n {
        if q == 2 && n == 2 {
            out.push((5, Sign::Plus));
            out.push((10, Sign::Minus));
        } else {
            out.push((pw(2 * n - 1) - pw(n) + pw(n - 1) - 1, Sign::Plus));
        }
    } else if t == 1 {
        // m - k_1 = q^{2n-2} - 1; the indices are its multiples up to q, then one more.
        let d = m - (1 + pw(2 * n - 1));
        for beta in 1..=q {
            out.push((beta * d, Sign::alternating(beta % 2 == 1)));
        }
        let j1 = pw(2 * n - 2) - pw(2 * n - 3) + q - 1;
        out.push((q * d + j1, Sign::alternating(q.is_multiple_of(2))));
        if q == 2 && n == 2 {
            out.push((m, Sign::Minus));
        }
    } else {
        let k1 = 1 + pw(2 * n - t);
        let kt = pw(t - 1) + pw(2 * n - 1);
        out.push((m - k1, Sign::Plus));
        out.push((m - (k1 + kt - m), Sign::Minus));
        for l in 0..q.saturating_sub(2) {
            let j2 = 1 + (2 + l) * pw(t - 1) + (q - 2 - l) * pw(2 * n - t - 1);
            out.push((m - j2, Sign::alternating(l % 2 == 0)));
        }
    }
    out.sort_by_key(|x| x.0);
    Ok(out)
}

/// Outcome of checking Newton's identities.
#[derive(Clone, Debug, Default, Serialize)]
pub struct NewtonReport {
    pub degree: u64,
    pub checked: u64,
    /// Values of `r` at which the identity fails.
    pub violations: Vec<u64>,
}

impl NewtonReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for `1 <= r <= r_max`, the identities
/// `Σ_{j<r} a_{m-j} s_{r-j} + r a_{m-r} = 0` (r <= m) and
/// `Σ_{j<=m} a_{m-j} s_{r-j} = 0` (r > m), for a polynomial with sparse
/// coefficients `coeffs` (exponent, value) of degree `m`.
pub fn newton_violations(
    f: &FieldCtx,
    coeffs: &[(u64, u32)],
    m: u64,
    s: impl Fn(u64) -> u32 + Sync,
    r_max: u64,
) -> NewtonReport {
    let a = |k: u64| coeffs.iter().find(|c| c.0 == k).map_or(0, |c| c.1);
    let violations: Vec<u64> = (1..=r_max)
        .into_par_iter()
        .filter(|&r| {
            let mut acc = 0u32;
            for &(k, c) in coeffs {
                // j = m - k; the r <= m identity only uses j < r.
                if k > m || (r <= m && m - k >= r) {
                    continue;
                }
                acc = f.add(acc, f.mul(c, s(r - (m - k))));
            }
            if r <= m {
                acc = f.add(acc, f.mul(f.from_int((r % f.p() as u64) as i64), a(m - r)));
            }
            acc != 0
        })
        .collect();
    NewtonReport {
        degree: m,
        checked: r_max,
        violations,
    }
}

/// Newton's identities for a trace-depending polynomial against its power sums.
pub fn verify_newton(poly: &TraceDepPoly, table: &PowerSumTable, r_max: u64) -> NewtonReport {
    let coeffs: Vec<(u64, u32)> = poly.support.iter().map(|(&k, &c)| (k, c)).collect();
    newton_violations(&poly.field, &coeffs, poly.degree(), |i| table.s(i), r_max)
}

/// Dense coefficients of `Π (X - β)` over the given roots.
pub fn poly_from_roots(f: &FieldCtx, roots: &[u32]) -> Vec<u32> {
    let mut c = vec![1u32];
    for &b in roots {
        let nb = f.neg(b);
        let mut next = vec![0u32; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], x);
            next[i] = f.add(next[i], f.mul(x, nb));
        }
        c = next;
    }
    c
}
