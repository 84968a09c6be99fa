//! Cyclotomic cosets, subfield-subcodes and the bounds that make them
//! Hermitian self-orthogonal.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::evalcode::{a_bound, ev_row, EvalCode};
use crate::field::linalg::{axpy_raw, Matrix};
use crate::field::FieldCtx;
use crate::qadic::group_order;
use crate::tracepoly::TraceDepPoly;

/// Cyclotomic cosets of `Z_N`, `N = q^{2n} - 1`, under multiplication by `q^{2n'}`.
#[derive(Clone, Debug, Serialize)]
pub struct CosetSystem {
    pub q: u64,
    pub n: u32,
    pub n_prime: u32,
    pub modulus: u64,
    pub multiplier: u64,
    /// Each coset sorted, cosets ordered by their minimum.
    pub cosets: Vec<Vec<u64>>,
    pub min_reps: Vec<u64>,
}

pub fn coset_system(q: u64, n: u32, n_prime: u32) -> Result<CosetSystem> {
    prime_power(q)?;
    if n_prime == 0 || n_prime >= n || !n.is_multiple_of(n_prime) {
        return Err(Error::NotDivisor {
            divisor: n_prime as u64,
            value: n as u64,
        });
    }
    let modulus = group_order(q, n)?;
    let multiplier = q.pow(2 * n_prime);
    let mut seen = vec![false; modulus as usize];
    let mut cosets = Vec::new();
    for g in 0..modulus {
        if seen[g as usize] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = g;
        while !seen[x as usize] {
            seen[x as usize] = true;
            c.push(x);
            x = ((x as u128 * multiplier as u128) % modulus as u128) as u64;
        }
        c.sort_unstable();
        cosets.push(c);
    }
    let min_reps = cosets.iter().map(|c| c[0]).collect();
    Ok(CosetSystem {
        q,
        n,
        n_prime,
        modulus,
        multiplier,
        cosets,
        min_reps,
    })
}

impl CosetSystem {
    /// `ω`, the index of the last minimal representative.
    pub fn omega(&self) -> usize {
        self.min_reps.len() - 1
    }

    /// `Γ(τ)`: the union of the first `τ + 1` cosets, sorted.
    pub fn gamma(&self, tau: usize) -> Result<Vec<u64>> {
        if tau > self.omega() {
            return Err(Error::OutOfRange {
                what: "tau beyond the last coset",
                value: tau as u64,
            });
        }
        let mut g: Vec<u64> = self.cosets[..=tau].iter().flatten().copied().collect();
        g.sort_unstable();
        Ok(g)
    }

    /// `Σ_{ℓ<=τ} #C_{g_ℓ}`.
    pub fn gamma_size(&self, tau: usize) -> usize {
        self.cosets[..=tau.min(self.omega())]
            .iter()
            .map(Vec::len)
            .sum()
    }

    /// Largest `τ` with `g_τ <= bound`.
    pub fn max_tau_within(&self, bound: i64) -> Option<usize> {
        self.min_reps.iter().rposition(|&g| (g as i64) <= bound)
    }
}

/// The quantities bounding the representatives for which the subfield-subcode
/// stays Hermitian self-orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundSet {
    pub a: i64,
    pub b: i64,
    pub b1: i64,
    /// `C = c_num / c_den`, kept exact.
    pub c_num: i64,
    pub c_den: i64,
    pub d: i64,
}

impl BoundSet {
    pub fn c_floor(&self) -> i64 {
        self.c_num.div_euclid(self.c_den)
    }
}

pub fn d_bound(q: u64, n: u32, t: u32, n_prime: u32) -> Result<BoundSet> {
    coset_system_check(q, n, n_prime)?;
    let a = a_bound(q, n, t)?;
    let qi = q as i64;
    let pw = |e: u32| qi.pow(e);
    let b = pw(n) - (qi - 1) * pw(n - t) - qi;
    let b1 = pw(n) - (qi - 1) * pw(n - t) - 2;
    // q^{n-2} with n >= 2 since n' < n.
    let c_num = pw(2 * n - 2) - 1;
    let c_den = pw(n - 2) + 1;
    let c_floor = c_num.div_euclid(c_den);
    let d = if t > 1 {
        if n_prime != 1 {
            a
        } else if n.is_multiple_of(2) {
            b
        } else {
            a.min(b)
        }
    } else if n != 2 {
        match n_prime {
            1 => b1,
            2 => c_floor,
            _ => a,
        }
    } else {
        qi - 2
    };
    Ok(BoundSet {
        a,
        b,
        b1,
        c_num,
        c_den,
        d,
    })
}

fn coset_system_check(q: u64, n: u32, n_prime: u32) -> Result<()> {
    prime_power(q)?;
    if n_prime == 0 || n_prime >= n || !n.is_multiple_of(n_prime) {
        return Err(Error::NotDivisor {
            divisor: n_prime as u64,
            value: n as u64,
        });
    }
    Ok(())
}

/// Generator of the subfield of degree `d` (over GF(p)).
fn subfield_generator(f: &FieldCtx, d: u32) -> u32 {
    let step = f.n_units() as u64 / ((f.p() as u64).pow(d) - 1);
    f.exp(step)
}

/// Basis `{1, γ, …, γ^{s-1}}` of the alphabet over the target subfield and its
/// trace-dual basis. Fails if the powers are not independent.
fn basis_and_dual(f: &FieldCtx, alphabet: u32, target: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    let s = (alphabet / target) as usize;
    let gamma = subfield_generator(f, alphabet);
    let basis: Vec<u32> = (0..s).map(|u| f.pow(gamma, u as u64)).collect();
    // Gram matrix of the trace form, entries in the target subfield.
    let mut t = vec![vec![0u32; s]; s];
    for u in 0..s {
        for v in 0..s {
            t[u][v] = f.trace_map_raw(f.mul(basis[u], basis[v]), alphabet, target)?;
        }
    }
    // Invert by Gauss-Jordan on [T | I].
    let mut aug: Vec<Vec<u32>> = (0..s)
        .map(|u| {
            let mut row = t[u].clone();
            row.extend((0..s).map(|v| u32::from(u == v)));
            row
        })
        .collect();
    for c in 0..s {
        let Some(p) = (c..s).find(|&r| aug[r][c] != 0) else {
            return Err(Error::Internal(
                "powers of the subfield generator are dependent".into(),
            ));
        };
        aug.swap(c, p);
        let inv = f.inv(aug[c][c]);
        for x in aug[c].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != c && row[c] != 0 {
                let k = f.neg(row[c]);
                axpy_raw(f, row, k, &pivot);
            }
        }
    }
    let dual = (0..s)
        .map(|v| (0..s).fold(0, |acc, w| f.add(acc, f.mul(aug[v][s + w], basis[w]))))
        .collect();
    Ok((basis, dual))
}

/// `code ∩ K^m` for the subfield `K` of degree `sub_degree` over GF(p), by
/// expanding codewords over a basis of the alphabet over `K` and solving for
/// the combinations whose non-constant components vanish.
pub fn subfield_subcode(code: &EvalCode, sub_degree: u32) -> Result<EvalCode> {
    let f = code.field.clone();
    let a = code.alphabet_degree;
    if sub_degree == 0 || !a.is_multiple_of(sub_degree) {
        return Err(Error::NotDivisor {
            divisor: sub_degree as u64,
            value: a as u64,
        });
    }
    let gen = code.gen.row_basis();
    let k = gen.rows();
    let m = code.length;
    let s = (a / sub_degree) as usize;
    let (basis, dual) = basis_and_dual(&f, a, sub_degree)?;
    // Spanning set over K: γ^u · row_i, unknown index i * s + u.
    let spanning: Vec<Vec<u32>> = (0..k)
        .flat_map(|i| basis.iter().map(move |&g| (i, g)))
        .map(|(i, g)| gen.row(i).iter().map(|&x| f.mul(g, x)).collect())
        .collect();
    let mut cons = Matrix::zeros(f.clone(), m * (s - 1), k * s);
    for j in 0..m {
        for (v, &theta) in dual.iter().enumerate().skip(1) {
            let r = j * (s - 1) + (v - 1);
            for (col, w) in spanning.iter().enumerate() {
                let x = f.trace_map_raw(f.mul(w[j], theta), a, sub_degree)?;
                cons.set(r, col, x);
            }
        }
    }
    let kernel = if s == 1 {
        Matrix::identity(f.clone(), k)
    } else {
        cons.kernel()
    };
    let mut words = Vec::with_capacity(kernel.rows());
    for r in 0..kernel.rows() {
        let mut w = vec![0u32; m];
        for (col, &c) in kernel.row(r).iter().enumerate() {
            axpy_raw(&f, &mut w, c, &spanning[col]);
        }
        if w.iter().any(|&x| !f.is_in_subfield(x, sub_degree)) {
            return Err(Error::Internal("subcode word left the subfield".into()));
        }
        words.push(w);
    }
    let sub = Matrix::from_rows(f.clone(), m, words)?.row_basis();
    Ok(EvalCode {
        field: f,
        alphabet_degree: sub_degree,
        length: m,
        delta: code.delta.clone(),
        dim: sub.rows(),
        gen: sub,
        construction: format!("{} restricted to GF(p^{sub_degree})", code.construction),
    })
}

/// Same intersection computed as `(Tr(C^⊥))^⊥` with Euclidean duals.
pub fn delsarte_subcode(code: &EvalCode, sub_degree: u32) -> Result<EvalCode> {
    let f = code.field.clone();
    let a = code.alphabet_degree;
    if sub_degree == 0 || !a.is_multiple_of(sub_degree) {
        return Err(Error::NotDivisor {
            divisor: sub_degree as u64,
            value: a as u64,
        });
    }
    let m = code.length;
    let dual = code.gen.kernel();
    let (basis, _) = basis_and_dual(&f, a, sub_degree)?;
    let mut traced = Vec::new();
    for r in 0..dual.rows() {
        for &g in &basis {
            let row: Result<Vec<u32>> = dual
                .row(r)
                .iter()
                .map(|&y| f.trace_map_raw(f.mul(g, y), a, sub_degree))
                .collect();
            traced.push(row?);
        }
    }
    let sub = if traced.is_empty() {
        Matrix::identity(f.clone(), m)
    } else {
        Matrix::from_rows(f.clone(), m, traced)?.kernel()
    };
    let sub = sub.row_basis();
    Ok(EvalCode {
        field: f,
        alphabet_degree: sub_degree,
        length: m,
        delta: code.delta.clone(),
        dim: sub.rows(),
        gen: sub,
        construction: format!(
            "{} restricted to GF(p^{sub_degree}) via trace of the dual",
            code.construction
        ),
    })
}

/// Whether two codes over the same field have the same row space.
pub fn same_code(x: &EvalCode, y: &EvalCode) -> bool {
    x.dim == y.dim && x.contains_code(y) && y.contains_code(x)
}

/// A restricted evaluation code on `Γ(τ)` together with its bookkeeping.
#[derive(Clone, Debug)]
pub struct GammaCode {
    pub code: EvalCode,
    pub tau: usize,
    pub n_prime: u32,
    /// `Σ_{ℓ<=τ} #C_{g_ℓ}`, the dimension bound before any relation.
    pub gamma_size: usize,
    /// `g_{τ+1} + 1`, lower bound on the Hermitian dual distance.
    pub distance_bound: u64,
    /// The polynomial's exponents all lie in `Γ(τ)`, forcing one relation.
    pub support_in_gamma: bool,
    /// `q^{n'}`, the conjugation for the Hermitian form over GF(q^{2n'}).
    pub conj_power: u64,
}

/// Evaluates `X^g`, `g ∈ Γ(τ)`, at the roots and restricts to GF(q^{2n'}).
pub fn gamma_tau_code(poly: &TraceDepPoly, cs: &CosetSystem, tau: usize) -> Result<GammaCode> {
    if tau >= cs.omega() {
        return Err(Error::OutOfRange {
            what: "tau must leave a next representative",
            value: tau as u64,
        });
    }
    let roots = poly
        .roots_raw()
        .ok_or_else(|| Error::Internal("roots must be enumerated before building a code".into()))?;
    let f = poly.field.clone();
    let (_, e) = prime_power(cs.q)?;
    if f.m() != e * 2 * cs.n {
        return Err(Error::DimensionMismatch(
            "coset system and polynomial use different fields".into(),
        ));
    }
    let gamma = cs.gamma(tau)?;
    let rows: Vec<Vec<u32>> = gamma.iter().map(|&g| ev_row(&f, roots, g)).collect();
    let gen = Matrix::from_rows(f.clone(), roots.len(), rows)?;
    let full = EvalCode {
        field: f.clone(),
        alphabet_degree: f.m(),
        length: roots.len(),
        delta: gamma.clone(),
        dim: gen.rank(),
        gen,
        construction: format!("Gamma({tau}) evaluation, {} exponents", gamma.len()),
    };
    let code = subfield_subcode(&full, e * 2 * cs.n_prime)?;
    let gset: BTreeSet<u64> = gamma.iter().copied().collect();
    let support_in_gamma = poly
        .support
        .keys()
        .all(|k| gset.contains(&(k % cs.modulus)));
    Ok(GammaCode {
        code,
        tau,
        n_prime: cs.n_prime,
        gamma_size: cs.gamma_size(tau),
        distance_bound: cs.min_reps[tau + 1] + 1,
        support_in_gamma,
        conj_power: cs.q.pow(cs.n_prime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalcode::{build_eval_code, check_self_orthogonal, delta_tau};
    use crate::field::DEFAULT_CAP;
    use crate::tracepoly::build_trb;

    fn poly(q: u64, n: u32, t: u32) -> TraceDepPoly {
        let mut p = build_trb(q, n, t).unwrap();
        p.enumerate_roots(DEFAULT_CAP).unwrap();
        p
    }

    #[test]
    fn binary_coset_representatives() {
        let cs = coset_system(2, 4, 1).unwrap();
        assert_eq!(&cs.min_reps[..10], &[0, 1, 2, 3, 5, 6, 7, 9, 10, 11]);
        assert!((1..=8).all(|l| cs.cosets[l].len() == 4));
        assert_eq!(cs.cosets[0], vec![0]);
        let cs2 = coset_system(2, 4, 2).unwrap();
        assert_eq!(cs2.cosets[1], vec![1, 16]);
        let total: usize = cs2.cosets.iter().map(Vec::len).sum();
        assert_eq!(total, 255);
        assert!(coset_system(2, 4, 3).is_err());
        assert!(coset_system(2, 4, 4).is_err());
    }

    #[test]
    fn bound_values() {
        let b = d_bound(2, 4, 2, 1).unwrap();
        assert_eq!((b.b, b.d), (10, 10));
        assert_eq!(d_bound(7, 2, 1, 1).unwrap().d, 5);
        assert_eq!(d_bound(5, 2, 1, 1).unwrap().d, 3);
        let b = d_bound(5, 2, 2, 1).unwrap();
        assert_eq!((b.b, b.d), (16, 16));
        assert_eq!(d_bound(7, 2, 2, 1).unwrap().b, 36);
        assert_eq!(d_bound(2, 4, 2, 2).unwrap().d, 12);
        assert_eq!(d_bound(2, 4, 3, 2).unwrap().d, 10);
    }

    #[test]
    fn b1_below_c() {
        for (q, n) in [(2u64, 4u32), (3, 4), (2, 6), (5, 4), (3, 3), (4, 3)] {
            let b = d_bound(q, n, 1, 1).unwrap();
            assert!(
                (b.b1 as i128) * (b.c_den as i128) < b.c_num as i128,
                "({q},{n})"
            );
        }
    }

    #[test]
    fn subfield_valued_code_is_unchanged() {
        let p = poly(2, 2, 1);
        let c = build_eval_code(&p, &[0]).unwrap();
        let s = subfield_subcode(&c, 1).unwrap();
        assert_eq!(s.dim, 1);
    }

    #[test]
    fn record_subcode_has_rank_32() {
        let p = poly(2, 4, 2);
        let cs = coset_system(2, 4, 1).unwrap();
        let g = gamma_tau_code(&p, &cs, 8).unwrap();
        assert_eq!(g.gamma_size, 33);
        assert!(g.support_in_gamma);
        assert_eq!(g.code.dim, 32);
        assert_eq!(g.distance_bound, 12);
        assert!(check_self_orthogonal(&g.code, g.conj_power).gram_zero);
    }

    #[test]
    fn table4_largest_subcode_dimension() {
        let p = poly(2, 4, 2);
        let cs = coset_system(2, 4, 2).unwrap();
        let g = gamma_tau_code(&p, &cs, 12).unwrap();
        assert_eq!(g.code.dim, 25);
        assert_eq!(g.distance_bound, 14);
    }

    #[test]
    fn kernel_and_delsarte_agree_on_small_codes() {
        let p = poly(2, 2, 1);
        let cs = coset_system(2, 2, 1).unwrap();
        for tau in 0..4 {
            let gamma = cs.gamma(tau).unwrap();
            let c = build_eval_code(&p, &gamma).unwrap();
            let a = subfield_subcode(&c, 2).unwrap();
            let b = delsarte_subcode(&c, 2).unwrap();
            assert!(same_code(&a, &b), "tau {tau}");
            assert!(c.contains_code(&a));
        }
        // A code that is not Galois closed.
        let c = build_eval_code(&p, &delta_tau(2)).unwrap();
        for d in [1, 2] {
            assert!(same_code(
                &subfield_subcode(&c, d).unwrap(),
                &delsarte_subcode(&c, d).unwrap()
            ));
        }
    }

    #[test]
    fn gamma_out_of_range() {
        let p = poly(2, 2, 1);
        let cs = coset_system(2, 2, 1).unwrap();
        assert!(gamma_tau_code(&p, &cs, cs.omega()).is_err());
    }
}
