//! Trace-depending polynomials `a + tr(h(X))` over GF(q^{2n}) and their roots.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::field::{field_with_cap, FieldCtx, FieldElement, DEFAULT_CAP};
use crate::qadic::{reduce_exponent, trb_params, TrbParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyKind {
    /// `1 + tr(X^b)` with `b = 1 + q^t`.
    Bth { t: u32, b: u64 },
    /// `a + tr_{2n}(h(X))`, `h` sparse as `(exponent, coefficient)`.
    General { a: u32, h: Vec<(u64, u32)> },
}

#[derive(Clone, Debug)]
pub struct TraceDepPoly {
    pub field: Arc<FieldCtx>,
    pub q: u64,
    pub n: u32,
    /// Exponent to nonzero raw coefficient. Nonzero exponents lie in `[1, N]`.
    pub support: BTreeMap<u64, u32>,
    pub kind: PolyKind,
    roots: Option<Vec<u32>>,
    pub property_a: Option<bool>,
    /// Set by root enumeration when the constant term vanishes.
    pub zero_is_root: bool,
    pub warnings: Vec<String>,
}

/// Report-friendly serialization of the support.
#[derive(Clone, Debug, Serialize)]
pub struct PolyJson {
    pub p: u32,
    pub q: u64,
    pub n: u32,
    pub m_degree: u64,
    /// `[exponent, discrete log of the coefficient]`.
    pub support: Vec<(u64, u32)>,
}

/// The field GF(q^{2n}) as an extension of its prime field.
pub fn big_field(q: u64, n: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    let (p, e) = prime_power(q)?;
    field_with_cap(p, e * 2 * n, cap)
}

/// Accumulates `Σ_{j<len} (c X^k)^{q^j}` into `support`, where `q = p^e`.
fn add_trace_orbit(
    field: &FieldCtx,
    e: u32,
    len: u32,
    k: u64,
    c: u32,
    support: &mut BTreeMap<u64, u32>,
) {
    let big_n = field.n_units() as u64;
    let q = (field.p() as u64).pow(e);
    let mut exp = reduce_exponent(k, big_n);
    let mut coeff = c;
    for _ in 0..len {
        let entry = support.entry(exp).or_insert(0);
        *entry = field.add(*entry, coeff);
        exp = reduce_exponent(exp * q, big_n);
        coeff = field.pow_p(coeff, e);
    }
}

fn finish_support(mut support: BTreeMap<u64, u32>) -> BTreeMap<u64, u32> {
    support.retain(|_, c| *c != 0);
    support
}

/// `Tr_b(X)` for `b = 1 + q^t`, using `tr_n` when `t = n` and `tr_{2n}` otherwise.
pub fn build_trb(q: u64, n: u32, t: u32) -> Result<TraceDepPoly> {
    build_trb_with_cap(q, n, t, DEFAULT_CAP)
}

pub fn build_trb_with_cap(q: u64, n: u32, t: u32, cap: u64) -> Result<TraceDepPoly> {
    let pr = trb_params(q, n, t)?;
    let e = prime_power(q)?.1;
    let field = big_field(q, n, cap)?;
    let len = if t == n { n } else { 2 * n };
    let mut support = BTreeMap::from([(0u64, 1u32)]);
    add_trace_orbit(&field, e, len, pr.b, 1, &mut support);
    Ok(TraceDepPoly {
        field,
        q,
        n,
        support: finish_support(support),
        kind: PolyKind::Bth { t, b: pr.b },
        roots: None,
        property_a: None,
        zero_is_root: false,
        warnings: Vec::new(),
    })
}

/// `a + tr_{2n}(h(X))` reduced modulo `X^{q^{2n}-1} - 1`.
pub fn build_general(
    field: Arc<FieldCtx>,
    q: u64,
    a: u32,
    h: &[(u64, u32)],
) -> Result<TraceDepPoly> {
    let (p, e) = prime_power(q)?;
    if p != field.p() || !field.m().is_multiple_of(2 * e) {
        return Err(Error::DimensionMismatch(format!(
            "GF({}^{}) is not GF(q^(2n)) for q = {q}",
            field.p(),
            field.m()
        )));
    }
    let n = field.m() / (2 * e);
    let h: Vec<(u64, u32)> = h.iter().copied().filter(|&(_, c)| c != 0).collect();
    if h.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut support = BTreeMap::new();
    if a != 0 {
        support.insert(0, a);
    }
    for &(k, c) in &h {
        add_trace_orbit(&field, e, 2 * n, k, c, &mut support);
    }
    Ok(TraceDepPoly {
        field,
        q,
        n,
        support: finish_support(support),
        kind: PolyKind::General { a, h },
        roots: None,
        property_a: None,
        zero_is_root: false,
        warnings: Vec::new(),
    })
}

impl TraceDepPoly {
    pub fn degree(&self) -> u64 {
        self.support.keys().next_back().copied().unwrap_or(0)
    }

    pub fn params(&self) -> Option<TrbParams> {
        match self.kind {
            PolyKind::Bth { t, .. } => trb_params(self.q, self.n, t).ok(),
            PolyKind::General { .. } => None,
        }
    }

    /// Coefficient `a_k` as a raw field value.
    pub fn coeff(&self, k: u64) -> u32 {
        self.support.get(&k).copied().unwrap_or(0)
    }

    pub fn eval_raw(&self, x: u32) -> u32 {
        let f = &*self.field;
        if x == 0 {
            return self.coeff(0);
        }
        self.support
            .iter()
            .fold(0, |acc, (&k, &c)| f.add(acc, f.mul(c, f.pow(x, k))))
    }

    /// Evaluates at every nonzero point `g^i` in ascending `i` and keeps the zeros.
    pub fn enumerate_roots(&mut self, cap: u64) -> Result<&[u32]> {
        if self.roots.is_none() {
            let f = self.field.clone();
            if f.order() as u64 > cap {
                return Err(Error::EnumerationCap {
                    requested: f.order() as u128,
                    cap,
                });
            }
            let big_n = f.n_units() as u64;
            let terms: Vec<(u64, u32)> =
                self.support.iter().map(|(&k, &c)| (k % big_n, c)).collect();
            let chunk = 4096u64;
            let chunks: Vec<Vec<u32>> = (0..big_n.div_ceil(chunk))
                .into_par_iter()
                .map(|ci| {
                    let start = ci * chunk;
                    let end = (start + chunk).min(big_n);
                    let mut logs: Vec<u64> = terms
                        .iter()
                        .map(|&(k, _)| (start as u128 * k as u128 % big_n as u128) as u64)
                        .collect();
                    let mut found = Vec::new();
                    for i in start..end {
                        let mut acc = 0u32;
                        for (l, &(k, c)) in logs.iter_mut().zip(&terms) {
                            acc = f.add(acc, f.mul(c, f.exp(*l)));
                            *l += k;
                            if *l >= big_n {
                                *l -= big_n;
                            }
                        }
                        if acc == 0 {
                            found.push(f.exp(i));
                        }
                    }
                    found
                })
                .collect();
            let roots: Vec<u32> = chunks.into_iter().flatten().collect();
            if self.coeff(0) == 0 {
                self.zero_is_root = true;
                self.warnings
                    .push("0 is a root; dropped from the evaluation points".into());
            }
            self.property_a = Some(roots.len() as u64 == self.degree());
            self.roots = Some(roots);
        }
        Ok(self.roots.as_deref().unwrap())
    }

    /// Roots if already enumerated, ordered by discrete log.
    pub fn roots_raw(&self) -> Option<&[u32]> {
        self.roots.as_deref()
    }

    pub fn roots(&self) -> Option<Vec<FieldElement>> {
        self.roots
            .as_ref()
            .map(|r| r.iter().map(|&v| self.field.el(v)).collect())
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            p: self.field.p(),
            q: self.q,
            n: self.n,
            m_degree: self.degree(),
            support: self
                .support
                .iter()
                .map(|(&k, &c)| (k, self.field.log(c).unwrap_or(0)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_new;
    use crate::qadic::support_of_trb;

    fn with_roots(q: u64, n: u32, t: u32) -> TraceDepPoly {
        let mut p = build_trb(q, n, t).unwrap();
        p.enumerate_roots(DEFAULT_CAP).unwrap();
        p
    }

    #[test]
    fn trb_small_support_and_degree() {
        let p = build_trb(2, 2, 1).unwrap();
        assert_eq!(
            p.support.keys().copied().collect::<Vec<_>>(),
            vec![0, 3, 6, 9, 12]
        );
        assert!(p.support.values().all(|&c| c == 1));
        assert_eq!(p.degree(), 12);
        assert_eq!(build_trb(2, 4, 3).unwrap().degree(), 144);
        assert_eq!(build_trb(11, 2, 1).unwrap().degree(), 1452);
    }

    #[test]
    fn trb_support_agrees_with_qadic() {
        for (q, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2), (5, 2), (3, 3)] {
            for t in 1..=n {
                let p = build_trb(q, n, t).unwrap();
                let keys: std::collections::BTreeSet<u64> = p.support.keys().copied().collect();
                assert_eq!(keys, support_of_trb(q, n, t).unwrap(), "({q},{n},{t})");
                assert!(p.support.values().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn trb_160_roots() {
        let p = with_roots(2, 4, 2);
        assert_eq!(p.roots_raw().unwrap().len(), 160);
        assert_eq!(p.property_a, Some(true));
    }

    #[test]
    fn full_trace_case_root_count() {
        // t = n: q^{n-1} + q^{2n-1} roots.
        for (q, n) in [(3u64, 2u32), (2, 2), (2, 3), (5, 2), (4, 2)] {
            let p = with_roots(q, n, n);
            assert_eq!(
                p.roots_raw().unwrap().len() as u64,
                q.pow(n - 1) + q.pow(2 * n - 1)
            );
            assert_eq!(p.property_a, Some(true));
        }
    }

    #[test]
    fn roots_reevaluate_to_zero_and_are_sorted_by_log() {
        let p = with_roots(3, 2, 1);
        let f = &p.field;
        let roots = p.roots_raw().unwrap();
        assert_eq!(roots.len(), 36);
        assert!(roots.iter().all(|&r| r != 0 && p.eval_raw(r) == 0));
        let logs: Vec<u32> = roots.iter().map(|&r| f.log(r).unwrap()).collect();
        assert!(logs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn general_matches_direct_trace_evaluation() {
        let f = field_new(2, 8).unwrap();
        let a = f.primitive();
        let h = vec![(19u64, a), (10, 1), (0, f.exp(7))];
        let poly = build_general(f.clone(), 2, 1, &h).unwrap();
        for x in 0..f.order() {
            let hx = h.iter().fold(0, |acc, &(k, c)| {
                f.add(acc, f.mul(c, if k == 0 { 1 } else { f.pow(x, k) }))
            });
            let direct = f.add(1, f.trace_map_raw(hx, 8, 1).unwrap());
            assert_eq!(poly.eval_raw(x), direct, "x = {x}");
        }
    }

    #[test]
    fn general_root_counts() {
        let f = field_new(2, 8).unwrap();
        let a = f.primitive();
        let mut p = build_general(f.clone(), 2, 1, &[(3, f.pow(a, 5))]).unwrap();
        assert_eq!(p.enumerate_roots(DEFAULT_CAP).unwrap().len(), 120);
        // Kernel of the absolute trace: 128 elements, zero reported separately.
        let mut k = build_general(f, 2, 0, &[(1, 1)]).unwrap();
        assert_eq!(k.enumerate_roots(DEFAULT_CAP).unwrap().len(), 127);
        assert!(k.zero_is_root && !k.warnings.is_empty());
    }

    #[test]
    fn general_rejects_zero_h() {
        let f = field_new(2, 4).unwrap();
        assert!(matches!(
            build_general(f.clone(), 2, 1, &[(3, 0)]),
            Err(Error::ZeroPolynomial)
        ));
        assert!(build_general(f, 3, 1, &[(1, 1)]).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let mut p = build_trb(2, 4, 2).unwrap();
        assert!(matches!(
            p.enumerate_roots(100),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let p = build_trb(2, 2, 1).unwrap();
        let v = serde_json::to_value(p.to_json()).unwrap();
        assert_eq!(v["m_degree"], 12);
        assert_eq!(v["support"][1], serde_json::json!([3, 0]));
    }
}
