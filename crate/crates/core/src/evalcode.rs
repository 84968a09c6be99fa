//! Evaluation codes at the roots of a trace-depending polynomial, Hermitian
//! self-orthogonality, and distance certificates.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, prime_power};
use crate::error::{Error, Result};
use crate::field::linalg::{axpy_raw, EchelonBasis, Matrix};
use crate::field::FieldCtx;
use crate::qadic::reduce_exponent;
use crate::tracepoly::TraceDepPoly;

/// Default number of column subsets tested exhaustively.
pub const DEFAULT_SUBSET_BUDGET: u64 = 2_000_000;
/// Random subsets tried when exhaustive certification is out of budget.
pub const DEFAULT_SAMPLE_TRIALS: u64 = 20_000;
/// Largest message space enumerated by [`true_min_distance`].
pub const MIN_DISTANCE_CAP: u64 = 1 << 24;

/// Upper end of the exponent range `Δ(τ) = {0, …, τ}` on which the Hermitian
/// Gram matrix is guaranteed to vanish.
pub fn a_bound(q: u64, n: u32, t: u32) -> Result<i64> {
    prime_power(q)?;
    if t == 0 || t > n {
        return Err(Error::OutOfRange {
            what: "t must satisfy 0 < t <= n",
            value: t as u64,
        });
    }
    let qi = q as i64;
    let pw = |e: u32| qi.pow(e);
    Ok(if q == 2 {
        if t < n {
            pw(n) - pw(t - 1) - 2
        } else {
            pw(n - 1) - 2
        }
    } else {
        // ceil((q - 1) / 2)
        let c = qi / 2;
        if t == n {
            pw(n - 1) - 2
        } else if 2 * t <= n {
            pw(n) - c * pw(n - 1) - c * pw(n - t - 1) - 2
        } else {
            pw(n) - c * pw(n - 1) - c * pw(t - 1) - 2
        }
    })
}

/// A linear code stored over the field of its evaluation points.
#[derive(Clone, Debug)]
pub struct EvalCode {
    pub field: Arc<FieldCtx>,
    /// Degree over GF(p) of the subfield holding every codeword coordinate.
    pub alphabet_degree: u32,
    pub length: usize,
    /// Exponents whose evaluations span the code (before any restriction).
    pub delta: Vec<u64>,
    pub gen: Matrix,
    pub dim: usize,
    pub construction: String,
}

impl EvalCode {
    pub fn alphabet_size(&self) -> u64 {
        (self.field.p() as u64).pow(self.alphabet_degree)
    }

    /// A copy whose generator rows are a reduced basis.
    pub fn with_basis(&self) -> EvalCode {
        let gen = self.gen.row_basis();
        EvalCode {
            dim: gen.rows(),
            gen,
            ..self.clone()
        }
    }

    /// Whether every row of `other` lies in this code.
    pub fn contains_code(&self, other: &EvalCode) -> bool {
        let mut eb = EchelonBasis::new(self.field.clone(), self.length);
        for r in 0..self.gen.rows() {
            eb.insert(self.gen.row(r));
        }
        (0..other.gen.rows()).all(|r| eb.contains(other.gen.row(r)))
    }

    /// Generator matrix with entries as discrete logs, `None` for zero.
    pub fn to_json(&self) -> GeneratorJson {
        GeneratorJson {
            p: self.field.p(),
            field_degree: self.field.m(),
            alphabet_degree: self.alphabet_degree,
            length: self.length,
            dim: self.dim,
            construction: self.construction.clone(),
            rows: (0..self.gen.rows())
                .map(|r| self.gen.row(r).iter().map(|&x| self.field.log(x)).collect())
                .collect(),
        }
    }

    /// One line per generator row, entries as polynomial-basis integers.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.gen.rows() {
            let line: Vec<String> = self.gen.row(r).iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub p: u32,
    pub field_degree: u32,
    pub alphabet_degree: u32,
    pub length: usize,
    pub dim: usize,
    pub construction: String,
    pub rows: Vec<Vec<Option<u32>>>,
}

/// Row `ev(X^i) = (β_1^i, …, β_m^i)` over the given points.
pub fn ev_row(f: &FieldCtx, points: &[u32], i: u64) -> Vec<u32> {
    let e = reduce_exponent(i, f.n_units() as u64);
    points
        .iter()
        .map(|&b| if e == 0 { 1 } else { f.pow(b, e) })
        .collect()
}

/// The code spanned by `ev(X^i)`, `i ∈ delta`, over the enumerated roots.
pub fn build_eval_code(poly: &TraceDepPoly, delta: &[u64]) -> Result<EvalCode> {
    if delta.is_empty() {
        return Err(Error::EmptyDelta);
    }
    let roots = poly
        .roots_raw()
        .ok_or_else(|| Error::Internal("roots must be enumerated before building a code".into()))?;
    let f = poly.field.clone();
    let rows: Vec<Vec<u32>> = delta.par_iter().map(|&i| ev_row(&f, roots, i)).collect();
    let gen = Matrix::from_rows(f.clone(), roots.len(), rows)?;
    let dim = gen.rank();
    Ok(EvalCode {
        alphabet_degree: f.m(),
        field: f,
        length: roots.len(),
        delta: delta.to_vec(),
        gen,
        dim,
        construction: format!("evaluation of {} monomials", delta.len()),
    })
}

/// `Δ(τ) = {0, 1, …, τ}`.
pub fn delta_tau(tau: u64) -> Vec<u64> {
    (0..=tau).collect()
}

/// `Σ x_i y_i^{conj}`.
pub fn hermitian_product(f: &FieldCtx, x: &[u32], y: &[u32], conj_power: u64) -> Result<u32> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y).fold(0, |acc, (&a, &b)| {
        f.add(acc, f.mul(a, f.pow(b, conj_power)))
    }))
}

/// Entry `(i, j)` is `row_i ·_h row_j`.
pub fn gram_matrix(code: &EvalCode, conj_power: u64) -> Matrix {
    let f = &*code.field;
    let k = code.gen.rows();
    let conj: Vec<Vec<u32>> = (0..k)
        .into_par_iter()
        .map(|j| {
            code.gen
                .row(j)
                .iter()
                .map(|&x| f.pow(x, conj_power))
                .collect()
        })
        .collect();
    let rows: Vec<Vec<u32>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let ri = code.gen.row(i);
            conj.iter()
                .map(|cj| {
                    ri.iter()
                        .zip(cj)
                        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(code.field.clone(), k, rows).expect("square gram matrix")
}

/// Outcome of a complete pairwise Hermitian check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SOCertificate {
    pub code: String,
    pub conjugation_power: u64,
    pub gram_zero: bool,
    /// First failing pair `(i, j)` in row-major order.
    pub witness: Option<(usize, usize)>,
    pub pairs_checked: usize,
}

pub fn check_self_orthogonal(code: &EvalCode, conj_power: u64) -> SOCertificate {
    let g = gram_matrix(code, conj_power);
    let k = g.rows();
    let witness = (0..k * k)
        .map(|x| (x / k, x % k))
        .find(|&(i, j)| g.get(i, j) != 0);
    SOCertificate {
        code: code.construction.clone(),
        conjugation_power: conj_power,
        gram_zero: witness.is_none(),
        witness,
        pairs_checked: k * k,
    }
}

/// Number of leading rows whose span is self-orthogonal, read off the Gram matrix.
pub fn so_prefix_len(gram: &Matrix) -> usize {
    let k = gram.rows();
    let mut len = 0;
    while len < k {
        let ok = (0..=len).all(|i| gram.get(i, len) == 0 && gram.get(len, i) == 0);
        if !ok {
            break;
        }
        len += 1;
    }
    len
}

/// Lower-bound certificate for the distance of the dual code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DualDistanceCert {
    /// Every subset of `delta_target - 1` columns was checked.
    Certified {
        delta_target: u64,
        #[serde(serialize_with = "count_ser")]
        subsets: u128,
    },
    /// Only `trials` random subsets were checked, all independent.
    SampledOnly {
        delta_target: u64,
        trials: u64,
        /// Saturates at `u128::MAX`.
        #[serde(serialize_with = "count_ser")]
        total_subsets: u128,
    },
    /// A dependent column subset, so the dual has a word of weight below the target.
    Refuted {
        delta_target: u64,
        columns: Vec<usize>,
    },
}

/// Counts beyond `u64` are written as decimal strings.
fn count_ser<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(*v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

impl DualDistanceCert {
    pub fn is_refuted(&self) -> bool {
        matches!(self, DualDistanceCert::Refuted { .. })
    }
    pub fn is_certified(&self) -> bool {
        matches!(self, DualDistanceCert::Certified { .. })
    }
}

fn columns_independent(f: &FieldCtx, gen: &Matrix, cols: &[usize]) -> bool {
    let k = gen.rows();
    let mut vecs: Vec<Vec<u32>> = cols
        .iter()
        .map(|&c| (0..k).map(|r| gen.get(r, c)).collect())
        .collect();
    // Plain elimination on at most a handful of short vectors.
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..vecs.len()).find(|&i| vecs[i][col] != 0) else {
            continue;
        };
        vecs.swap(rank, p);
        let inv = f.inv(vecs[rank][col]);
        let pivot: Vec<u32> = vecs[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for v in vecs.iter_mut().skip(rank + 1) {
            let c = v[col];
            if c != 0 {
                axpy_raw(f, v, f.neg(c), &pivot);
            }
        }
        rank += 1;
        if rank == vecs.len() {
            break;
        }
    }
    rank == cols.len()
}

/// Advances `c` to the next `r`-subset of `0..m` in lexicographic order.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let r = c.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if c[i] < m - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Decides whether every `delta_target - 1` columns of the generator matrix are
/// independent, which bounds the distance of the (Euclidean or Hermitian) dual
/// from below by `delta_target`.
pub fn certify_dual_distance(
    code: &EvalCode,
    delta_target: u64,
    budget: u64,
    trials: u64,
    seed: u64,
) -> DualDistanceCert {
    let f = &*code.field;
    let gen = code.gen.row_basis();
    let r = delta_target.saturating_sub(1) as usize;
    let m = code.length;
    if r == 0 {
        return DualDistanceCert::Certified {
            delta_target,
            subsets: 1,
        };
    }
    if r > gen.rows() || r > m {
        return DualDistanceCert::Refuted {
            delta_target,
            columns: (0..r.min(m)).collect(),
        };
    }
    let total = binomial(m as u64, r as u64);
    if total <= budget as u128 {
        let found = (0..=m - r).into_par_iter().find_map_first(|first| {
            let mut c: Vec<usize> = (first..first + r).collect();
            loop {
                if !columns_independent(f, &gen, &c) {
                    return Some(c);
                }
                // The tail only moves forward, so the leading index stays fixed.
                if !next_combination(&mut c[1..], m) {
                    return None;
                }
            }
        });
        match found {
            Some(columns) => DualDistanceCert::Refuted {
                delta_target,
                columns,
            },
            None => DualDistanceCert::Certified {
                delta_target,
                subsets: total,
            },
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut c: Vec<usize> = sample(&mut rng, m, r).into_vec();
            c.sort_unstable();
            if !columns_independent(f, &gen, &c) {
                return DualDistanceCert::Refuted {
                    delta_target,
                    columns: c,
                };
            }
        }
        DualDistanceCert::SampledOnly {
            delta_target,
            trials,
            total_subsets: total,
        }
    }
}

/// Exact minimum distance by enumerating messages with leading coefficient 1.
pub fn true_min_distance(code: &EvalCode) -> Result<u64> {
    let basis = code.gen.row_basis();
    let k = basis.rows();
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let qa = code.alphabet_size();
    let space = (qa as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if space > MIN_DISTANCE_CAP as u128 {
        return Err(Error::EnumerationCap {
            requested: space,
            cap: MIN_DISTANCE_CAP,
        });
    }
    let f = &*code.field;
    let alphabet = f.subfield_members_raw(code.alphabet_degree)?;
    let m = code.length;
    // Codewords whose first nonzero message coordinate is `lead` equal 1.
    let best = (0..k)
        .into_par_iter()
        .map(|lead| {
            let mut best = u64::MAX;
            let start = basis.row(lead).to_vec();
            let rest = k - lead - 1;
            let total = qa.pow(rest as u32);
            let mut word = start.clone();
            let mut digits = vec![0usize; rest];
            for idx in 0..total {
                if idx > 0 {
                    // Odometer step: update the codeword incrementally.
                    let mut pos = 0;
                    loop {
                        let old = alphabet[digits[pos]];
                        digits[pos] = (digits[pos] + 1) % alphabet.len();
                        let new = alphabet[digits[pos]];
                        let row = basis.row(lead + 1 + pos);
                        let diff = f.sub(new, old);
                        axpy_raw(f, &mut word, diff, row);
                        if digits[pos] != 0 {
                            break;
                        }
                        pos += 1;
                    }
                }
                let w = word.iter().filter(|&&x| x != 0).count() as u64;
                best = best.min(w);
            }
            best
        })
        .min()
        .unwrap_or(m as u64);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_CAP;
    use crate::powersums::power_sums;
    use crate::tracepoly::build_trb;
    use proptest::prelude::*;
    use rand::Rng;

    fn poly(q: u64, n: u32, t: u32) -> TraceDepPoly {
        let mut p = build_trb(q, n, t).unwrap();
        p.enumerate_roots(DEFAULT_CAP).unwrap();
        p
    }

    #[test]
    fn a_bound_values() {
        assert_eq!(a_bound(2, 4, 2).unwrap(), 12);
        assert_eq!(a_bound(2, 4, 3).unwrap(), 10);
        assert_eq!(a_bound(5, 2, 1).unwrap(), 11);
        assert_eq!(a_bound(7, 2, 1).unwrap(), 23);
        assert_eq!(a_bound(3, 2, 1).unwrap(), 3);
        assert_eq!(a_bound(3, 4, 2).unwrap(), 49);
        assert_eq!(a_bound(3, 4, 3).unwrap(), 43);
        assert_eq!(a_bound(11, 2, 1).unwrap(), 59);
        assert!(a_bound(2, 2, 3).is_err());
    }

    #[test]
    fn all_ones_code() {
        let p = poly(2, 2, 1);
        let c = build_eval_code(&p, &[0]).unwrap();
        assert_eq!(c.dim, 1);
        assert!(c.gen.row(0).iter().all(|&x| x == 1));
        assert_eq!(true_min_distance(&c).unwrap(), 12);
        assert!(certify_dual_distance(&c, 2, DEFAULT_SUBSET_BUDGET, 10, 0).is_certified());
        assert!(matches!(build_eval_code(&p, &[]), Err(Error::EmptyDelta)));
    }

    #[test]
    fn ternary_length_36_code() {
        let p = poly(3, 2, 1);
        let c = build_eval_code(&p, &delta_tau(3)).unwrap();
        assert_eq!((c.dim, c.length), (4, 36));
        assert!(check_self_orthogonal(&c, 9).gram_zero);
        let cert = certify_dual_distance(&c, 5, DEFAULT_SUBSET_BUDGET, 0, 0);
        assert_eq!(
            cert,
            DualDistanceCert::Certified {
                delta_target: 5,
                subsets: 58905
            }
        );
    }

    #[test]
    fn binary_length_160_is_sampled() {
        let p = poly(2, 4, 2);
        let c = build_eval_code(&p, &delta_tau(12)).unwrap();
        assert!(check_self_orthogonal(&c, 16).gram_zero);
        let cert = certify_dual_distance(&c, 14, DEFAULT_SUBSET_BUDGET, 200, 1);
        assert!(matches!(
            cert,
            DualDistanceCert::SampledOnly { trials: 200, .. }
        ));
    }

    #[test]
    fn gram_fails_past_the_bound() {
        let p = poly(2, 4, 2);
        let c = build_eval_code(&p, &delta_tau(40)).unwrap();
        let cert = check_self_orthogonal(&c, 16);
        assert!(!cert.gram_zero);
        let (i, j) = cert.witness.unwrap();
        let s = power_sums(&p, 0).unwrap();
        assert_ne!(s.s(i as u64 + 16 * j as u64), 0);
        assert!(so_prefix_len(&gram_matrix(&c, 16)) >= 13);
    }

    #[test]
    fn dependent_columns_are_refuted() {
        let p = poly(2, 2, 1);
        // A dimension-2 code cannot have 3 independent columns.
        let c = build_eval_code(&p, &delta_tau(1)).unwrap();
        assert!(certify_dual_distance(&c, 4, DEFAULT_SUBSET_BUDGET, 0, 0).is_refuted());
    }

    #[test]
    fn min_distance_at_least_bound() {
        let p = poly(2, 2, 1);
        let c = build_eval_code(&p, &delta_tau(1)).unwrap();
        let d = true_min_distance(&c).unwrap();
        // Two evaluations of degree <= 1 polynomials agree in at most one point.
        assert!(d >= 11);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut c, 4) {
            n += 1;
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn text_and_json_exports() {
        let p = poly(2, 2, 1);
        let c = build_eval_code(&p, &delta_tau(1)).unwrap();
        assert_eq!(c.to_text().lines().count(), 2);
        let j = serde_json::to_value(c.to_json()).unwrap();
        assert_eq!(j["rows"][0][0], 0);
    }

    #[test]
    fn gram_entries_are_power_sums() {
        let p = poly(3, 2, 1);
        let s = power_sums(&p, 0).unwrap();
        let f = &p.field;
        let roots = p.roots_raw().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = rng.gen_range(0..80u64);
            let b = rng.gen_range(0..80u64);
            let h = hermitian_product(f, &ev_row(f, roots, a), &ev_row(f, roots, b), 9).unwrap();
            assert_eq!(h, s.s(a + 9 * b));
        }
        assert_eq!(hermitian_product(f, &[0, 0], &[0, 0], 9).unwrap(), 0);
        let x = ev_row(f, roots, 5);
        let euclid = x.iter().fold(0, |acc, &v| f.add(acc, f.mul(v, v)));
        assert_eq!(hermitian_product(f, &x, &x, 1).unwrap(), euclid);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn larger_delta_contains_smaller(mut small in prop::collection::vec(0u64..40, 1..6), extra in prop::collection::vec(0u64..40, 0..6)) {
            let p = poly(3, 2, 1);
            small.sort_unstable();
            small.dedup();
            let mut big = small.clone();
            big.extend(extra);
            let a = build_eval_code(&p, &small).unwrap();
            let b = build_eval_code(&p, &big).unwrap();
            prop_assert!(b.contains_code(&a));
        }
    }
}
