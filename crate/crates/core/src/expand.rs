//! Stabilizer parameters from Hermitian self-orthogonal codes, base-field
//! expansion, propagation and the Gilbert-Varshamov comparison.

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::evalcode::{EvalCode, SOCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Exact,
    Lower,
}

/// One link of the chain that produced a parameter set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Step {
    /// Classical evaluation code; `tau` and `n_prime` when they apply.
    Construction {
        label: String,
        tau: Option<u64>,
        n_prime: Option<u32>,
        exponents: usize,
    },
    Stabilizer {
        classical_length: u64,
        classical_dim: u64,
        conj_power: u64,
    },
    Expansion {
        r: u32,
    },
    DropDimension,
    ExtendLength,
    /// Gilbert-Varshamov comparison in the Feng-Ma form.
    GvComparison {
        gv_distance: u64,
        exceeds: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantumParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub d_kind: DistanceKind,
    pub q: u64,
    pub derivation: Vec<Step>,
}

impl QuantumParams {
    pub fn new(n: u64, k: u64, d: u64, q: u64, derivation: Vec<Step>) -> Result<Self> {
        prime_power(q)?;
        if k > n {
            return Err(Error::OutOfRange {
                what: "dimension above length",
                value: k,
            });
        }
        if d == 0 {
            return Err(Error::OutOfRange {
                what: "distance must be at least 1",
                value: 0,
            });
        }
        Ok(QuantumParams {
            n,
            k,
            d,
            d_kind: DistanceKind::Lower,
            q,
            derivation,
        })
    }

    pub fn with_step(mut self, s: Step) -> Self {
        self.derivation.push(s);
        self
    }

    /// `[[n,k,≥d]]_q` or `[[n,k,d]]_q`.
    pub fn label(&self) -> String {
        let ge = if self.d_kind == DistanceKind::Lower {
            "≥"
        } else {
            ""
        };
        format!("[[{},{},{}{}]]_{}", self.n, self.k, ge, self.d, self.q)
    }

    pub fn triple(&self) -> (u64, u64, u64) {
        (self.n, self.k, self.d)
    }
}

/// `[[n, n - 2k, ≥ d]]_Q` from an `(n, k)` code over GF(Q^2) whose Gram matrix
/// for `x ↦ x^Q` vanishes.
pub fn stabilizer_from_so(
    code: &EvalCode,
    cert: &SOCertificate,
    d_bound: u64,
    derivation: Vec<Step>,
) -> Result<QuantumParams> {
    if !code.alphabet_degree.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(
            "alphabet is not a quadratic extension".into(),
        ));
    }
    let big_q = (code.field.p() as u64).pow(code.alphabet_degree / 2);
    if cert.conjugation_power != big_q {
        return Err(Error::DimensionMismatch(format!(
            "certificate uses x^{} but the alphabet needs x^{big_q}",
            cert.conjugation_power
        )));
    }
    if !cert.gram_zero {
        return Err(Error::NotSelfOrthogonal(cert.witness));
    }
    let n = code.length as u64;
    let k = code.dim as u64;
    if 2 * k > n {
        return Err(Error::OutOfRange {
            what: "self-orthogonal dimension above n/2",
            value: k,
        });
    }
    let d = if k == 0 { 1 } else { d_bound.max(1) };
    let step = Step::Stabilizer {
        classical_length: n,
        classical_dim: k,
        conj_power: big_q,
    };
    Ok(QuantumParams::new(n, n - 2 * k, d, big_q, derivation)?.with_step(step))
}

/// `[[n, k, ≥d]]_{q^r}` to `[[rn, rk, ≥d]]_q`, i.e. `rn - 2r·k_classical`.
pub fn expand_basefield(p: &QuantumParams, r: u32) -> Result<QuantumParams> {
    if r == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let (prime, e) = prime_power(p.q)?;
    if e % r != 0 {
        return Err(Error::NotDivisor {
            divisor: r as u64,
            value: e as u64,
        });
    }
    let q = (prime as u64).pow(e / r);
    let r64 = r as u64;
    let n =
        p.n.checked_mul(r64)
            .ok_or(Error::Overflow("expanded length"))?;
    let mut out = QuantumParams::new(n, p.k * r64, p.d, q, p.derivation.clone())?;
    out.d_kind = DistanceKind::Lower;
    Ok(out.with_step(Step::Expansion { r }))
}

/// `[[n, k-1, ≥d]]` (when `k >= 1`) and `[[n+1, k, ≥d]]`.
pub fn propagate(p: &QuantumParams) -> Vec<QuantumParams> {
    let mut out = Vec::with_capacity(2);
    let base = |n, k, s| {
        let mut x = p.clone();
        x.n = n;
        x.k = k;
        x.d_kind = DistanceKind::Lower;
        x.derivation
            .retain(|st| !matches!(st, Step::GvComparison { .. }));
        x.with_step(s)
    };
    if p.k >= 1 {
        out.push(base(p.n, p.k - 1, Step::DropDimension));
    }
    out.push(base(p.n + 1, p.k, Step::ExtendLength));
    out
}

/// Whether the Feng-Ma inequality guarantees an `[[n, k, d]]_q` code:
/// `(q^{n-k+2} - 1)/(q^2 - 1) > Σ_{i=1}^{d-1} C(n,i)(q^2-1)^{i-1}`.
pub fn gv_guarantees(n: u64, k: u64, d: u64, q: u64) -> bool {
    if d <= 1 {
        return true;
    }
    if k > n {
        return false;
    }
    let qb = BigUint::from(q);
    let q2m1 = &qb * &qb - 1u32;
    // The quotient is not an integer when n - k is odd, so compare numerators.
    let lhs = qb.pow((n - k + 2) as u32) - 1u32;
    let mut sum = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    let mut pw = q2m1.clone();
    for i in 1..d {
        binom = binom * (n + 1 - i) / i;
        sum += &binom * &pw;
        if sum >= lhs {
            return false;
        }
        pw *= &q2m1;
    }
    lhs > sum
}

/// Largest `d` the Feng-Ma inequality guarantees for `(n, k)`, at least 1.
pub fn gv_max_distance(n: u64, k: u64, q: u64) -> u64 {
    // The sum is increasing in d, so the guaranteed set is an initial segment.
    let mut d = 1;
    while d < n && gv_guarantees(n, k, d + 1, q) {
        d += 1;
    }
    d
}

/// Strictly beats the largest GV-guaranteed distance for the same `(n, k)`.
pub fn exceeds_gv(p: &QuantumParams) -> bool {
    if p.d <= 1 {
        return true;
    }
    p.d > gv_max_distance(p.n, p.k, p.q)
}

/// Appends a fresh comparison step, replacing any earlier one.
pub fn annotate_gv(mut p: QuantumParams) -> QuantumParams {
    p.derivation
        .retain(|s| !matches!(s, Step::GvComparison { .. }));
    let gv_distance = gv_max_distance(p.n, p.k, p.q);
    let exceeds = exceeds_gv(&p);
    p.with_step(Step::GvComparison {
        gv_distance,
        exceeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use proptest::prelude::*;

    fn params(n: u64, k: u64, d: u64, q: u64) -> QuantumParams {
        QuantumParams::new(n, k, d, q, Vec::new()).unwrap()
    }

    /// Same inequality in f64 logarithms, used away from the boundary.
    fn gv_float(n: u64, k: u64, d: u64, q: u64) -> Option<bool> {
        let qf = q as f64;
        let lhs = ((n - k + 2) as f64) * qf.ln() - (qf * qf - 1.0).ln();
        let mut terms = Vec::new();
        for i in 1..d {
            let b = binomial(n, i);
            if b == u128::MAX {
                return None;
            }
            terms.push((b as f64).ln() + ((i - 1) as f64) * (qf * qf - 1.0).ln());
        }
        let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let rhs = mx + terms.iter().map(|t| (t - mx).exp()).sum::<f64>().ln();
        if (lhs - rhs).abs() < 1e-6 {
            None
        } else {
            Some(lhs > rhs)
        }
    }

    #[test]
    fn record_code_beats_gv() {
        let p = params(160, 96, 12, 2);
        assert!(exceeds_gv(&p));
        assert!(gv_max_distance(160, 96, 2) < 12);
    }

    #[test]
    fn weak_code_does_not_beat_gv() {
        // (5^4 - 1)/24 = 26 > 20, so d = 2 is already guaranteed.
        assert!(!exceeds_gv(&params(20, 18, 2, 5)));
        assert!(exceeds_gv(&params(10, 10, 1, 2)));
    }

    #[test]
    fn tiny_inequality_by_hand() {
        // n=5, k=1, q=2: lhs = (2^6 - 1)/3 = 21; d=3 sum = 5 + 10·3 = 35.
        assert!(gv_guarantees(5, 1, 2, 2));
        assert!(!gv_guarantees(5, 1, 3, 2));
        assert_eq!(gv_max_distance(5, 1, 2), 2);
    }

    #[test]
    fn propagation_records() {
        let p = params(160, 96, 12, 2);
        let next = propagate(&p);
        let labels: Vec<_> = next.iter().map(QuantumParams::label).collect();
        assert_eq!(labels, ["[[160,95,≥12]]_2", "[[161,96,≥12]]_2"]);
        let p162 = propagate(&next[1]).pop().unwrap();
        let p163 = propagate(&p162).pop().unwrap();
        assert_eq!(p163.triple(), (163, 96, 12));
        assert_eq!(propagate(&params(5, 0, 2, 2)).len(), 1);
    }

    #[test]
    fn expansion_arithmetic() {
        let p = params(160, 160 - 2 * 9, 10, 16);
        let e = expand_basefield(&p, 4).unwrap();
        assert_eq!((e.n, e.k, e.d, e.q), (640, 640 - 8 * 9, 10, 2));
        assert!(expand_basefield(&params(36, 28, 5, 9), 3).is_err());
        assert_eq!(
            expand_basefield(&params(150, 142, 5, 25), 2)
                .unwrap()
                .triple(),
            (300, 284, 5)
        );
    }

    #[test]
    fn invalid_params() {
        assert!(QuantumParams::new(3, 4, 1, 2, vec![]).is_err());
        assert!(QuantumParams::new(3, 1, 0, 2, vec![]).is_err());
        assert!(QuantumParams::new(3, 1, 1, 6, vec![]).is_err());
    }

    proptest! {
        #[test]
        fn exact_matches_float_away_from_ties(n in 4u64..200, kk in 0u64..200, d in 2u64..12, qi in 0usize..4) {
            let q = [2u64, 3, 4, 5][qi];
            let k = kk % n;
            if let Some(expected) = gv_float(n, k, d, q) {
                prop_assert_eq!(gv_guarantees(n, k, d, q), expected);
            }
        }

        #[test]
        fn guaranteed_set_is_downward_closed(n in 4u64..120, kk in 0u64..120, qi in 0usize..3) {
            let q = [2u64, 3, 7][qi];
            let k = kk % n;
            let dm = gv_max_distance(n, k, q);
            for d in 1..=dm {
                prop_assert!(gv_guarantees(n, k, d, q));
            }
            prop_assert!(dm == n || !gv_guarantees(n, k, dm + 1, q));
        }
    }
}
