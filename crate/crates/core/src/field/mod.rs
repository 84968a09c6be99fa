//! Arithmetic in GF(p^m).
//!
//! An element is stored as the integer `Σ c_i p^i` of its coefficient vector
//! in the polynomial basis `1, X, …, X^{m-1}` modulo the field's defining
//! polynomial. Fields of order at most [`TABLE_LIMIT`] get lazily built
//! exp/log/Zech tables; larger ones fall back to polynomial-basis products.

pub mod conway;
pub mod gfp_poly;
pub mod linalg;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

pub use conway::ModulusSource;

/// Default bound on the field order accepted by [`field_new`].
pub const DEFAULT_CAP: u64 = 1 << 26;
/// Largest field order for which lookup tables are built.
pub const TABLE_LIMIT: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2N`, so sums of two logs index directly.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0] = NO_LOG`.
    log: Vec<u32>,
    /// `g^{zech[i]} = 1 + g^i`, `NO_LOG` where `1 + g^i = 0`.
    zech: Vec<u32>,
}

/// An immutable finite-field context.
pub struct FieldCtx {
    id: u32,
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    source: ModulusSource,
    primitive: u32,
    /// `p^i` for `0 <= i <= m`.
    place: Vec<u32>,
    tables: OnceLock<Option<Tables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("id", &self.id)
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("source", &self.source)
            .finish()
    }
}

/// A field element tagged with the id of its context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub ctx: u32,
    pub v: u32,
}

static NEXT_ID: AtomicU32 = AtomicU32::new(1);

type Registry = Mutex<HashMap<(u32, u32), Arc<FieldCtx>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the shared context for GF(p^m) under the default cap.
pub fn field_new(p: u32, m: u32) -> Result<Arc<FieldCtx>> {
    field_with_cap(p, m, DEFAULT_CAP)
}

/// Returns the shared context for GF(p^m), rejecting orders above `cap`.
pub fn field_with_cap(p: u32, m: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::InvalidDegree(m));
    }
    let order = (p as u64)
        .checked_pow(m)
        .filter(|&o| o <= cap && o <= u32::MAX as u64)
        .ok_or(Error::CapExceeded { p, m, cap })?;
    if let Some(ctx) = registry().lock().unwrap().get(&(p, m)) {
        return Ok(ctx.clone());
    }
    let (modulus, source) = conway::modulus_for(p, m)?;
    let ctx = Arc::new(FieldCtx::from_modulus(p, m, order as u32, modulus, source)?);
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, m)).or_insert(ctx).clone())
}

impl FieldCtx {
    fn from_modulus(
        p: u32,
        m: u32,
        order: u32,
        modulus: Vec<u32>,
        source: ModulusSource,
    ) -> Result<Self> {
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus {
                p,
                m,
                reason: "modulus must be monic of degree m".into(),
            });
        }
        if !gfp_poly::is_primitive(&modulus, p) {
            return Err(Error::InvalidModulus {
                p,
                m,
                reason: "modulus is not primitive".into(),
            });
        }
        let place: Vec<u32> = (0..=m).map(|i| p.pow(i)).collect();
        // The primitive element is the class of X; for m = 1 that is the root -c0 of X + c0.
        let primitive = if m == 1 { (p - modulus[0]) % p } else { p };
        Ok(FieldCtx {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            m,
            order,
            modulus,
            source,
            primitive,
            place,
            tables: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Size of the multiplicative group.
    pub fn n_units(&self) -> u32 {
        self.order - 1
    }
    /// Monic defining polynomial, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn modulus_source(&self) -> ModulusSource {
        self.source
    }
    pub fn primitive(&self) -> u32 {
        self.primitive
    }
    pub fn primitive_element(&self) -> FieldElement {
        self.el(self.primitive)
    }
    pub fn has_tables(&self) -> bool {
        self.tables().is_some()
    }

    pub fn el(&self, v: u32) -> FieldElement {
        debug_assert!(v < self.order);
        FieldElement { ctx: self.id, v }
    }
    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }
    pub fn one(&self) -> FieldElement {
        self.el(1)
    }
    /// Image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| (self.order as u64 <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> Tables {
        let n = self.n_units() as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NO_LOG; self.order as usize];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().take(n).enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x = self.mul_poly_basis(x, self.primitive);
        }
        debug_assert_eq!(x, 1, "primitive element has wrong order");
        exp.copy_within(0..n, n);
        let zech = (0..n)
            .map(|i| {
                let s = self.add_digits(exp[i], 1);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        Tables { exp, log, zech }
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.m as usize];
        for c in d.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for i in 0..self.m as usize {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.place[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    /// Product computed in the polynomial basis, independent of the tables.
    pub fn mul_poly_basis(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let r = gfp_poly::mul_mod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        self.undigits(&r)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        match self.tables() {
            Some(t) => {
                let n = self.n_units();
                let (la, lb) = (t.log[a as usize], t.log[b as usize]);
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        match self.tables() {
            Some(t) => {
                // -1 = g^{N/2} in odd characteristic.
                let half = self.n_units() / 2;
                t.exp[(t.log[a as usize] + half) as usize]
            }
            None => {
                let d: Vec<u32> = self
                    .digits(a)
                    .iter()
                    .map(|&c| (self.p - c) % self.p)
                    .collect();
                self.undigits(&d)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match self.tables() {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_poly_basis(a, b),
        }
    }

    /// Multiplicative inverse; `inv(0)` is reported as an error by the checked API
    /// and returns 0 here.
    pub fn inv(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        match self.tables() {
            Some(t) => {
                let la = t.log[a as usize];
                t.exp[((self.n_units() - la) % self.n_units()) as usize]
            }
            None => self.pow(a, self.order as u64 - 2),
        }
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match self.tables() {
            Some(t) => {
                let n = self.n_units() as u64;
                let l = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
                t.exp[l]
            }
            None => {
                let mut e = e % self.n_units() as u64;
                let mut base = a;
                let mut acc = 1u32;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul_poly_basis(acc, base);
                    }
                    base = self.mul_poly_basis(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    /// `g^k` for the context's primitive element `g`.
    pub fn exp(&self, k: u64) -> u32 {
        let n = self.n_units() as u64;
        match self.tables() {
            Some(t) => t.exp[(k % n) as usize],
            None => self.pow(self.primitive, k % n),
        }
    }

    /// Discrete log to base the primitive element, `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match self.tables() {
            Some(t) => Some(t.log[a as usize]),
            None => {
                let mut x = 1u32;
                for i in 0..self.n_units() {
                    if x == a {
                        return Some(i);
                    }
                    x = self.mul_poly_basis(x, self.primitive);
                }
                None
            }
        }
    }

    /// Zech logarithm: `g^{zech(i)} = 1 + g^i`, `None` when the sum vanishes.
    pub fn zech(&self, i: u32) -> Option<u32> {
        let n = self.n_units();
        match self.tables() {
            Some(t) => {
                let z = t.zech[(i % n) as usize];
                (z != NO_LOG).then_some(z)
            }
            None => self.log(self.add_digits(self.exp(i as u64), 1)),
        }
    }

    /// `x^{p^{e·base}}`.
    pub fn frobenius(&self, x: u32, e: u32, base: u32) -> u32 {
        let k = (e as u64 * base as u64) % self.m as u64;
        let mut y = x;
        for _ in 0..k {
            y = self.pow(y, self.p as u64);
        }
        y
    }

    /// `x^{p^k}` computed with a single exponentiation.
    pub fn pow_p(&self, x: u32, k: u32) -> u32 {
        let k = k % self.m;
        self.pow(x, (self.p as u64).pow(k))
    }

    pub fn is_in_subfield(&self, x: u32, degree: u32) -> bool {
        self.m.is_multiple_of(degree) && self.pow_p(x, degree) == x
    }

    /// Relative trace from the subfield of degree `from` to that of degree `to`,
    /// both measured over GF(p).
    pub fn trace_map_raw(&self, x: u32, from: u32, to: u32) -> Result<u32> {
        if to == 0 || from == 0 || !from.is_multiple_of(to) || !self.m.is_multiple_of(from) {
            return Err(Error::NotDivisor {
                divisor: to as u64,
                value: from as u64,
            });
        }
        if !self.is_in_subfield(x, from) {
            return Err(Error::NotInSubfield { degree: from });
        }
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..from / to {
            acc = self.add(acc, y);
            y = self.pow_p(y, to);
        }
        Ok(acc)
    }

    /// Elements of the subfield of the given degree over GF(p), ascending.
    pub fn subfield_members_raw(&self, degree: u32) -> Result<Vec<u32>> {
        if degree == 0 || !self.m.is_multiple_of(degree) {
            return Err(Error::NotDivisor {
                divisor: degree as u64,
                value: self.m as u64,
            });
        }
        // Nonzero members are the powers of g^{(p^m-1)/(p^d-1)}.
        let sub_units = (self.p as u64).pow(degree) - 1;
        let step = self.n_units() as u64 / sub_units;
        let mut out: Vec<u32> = std::iter::once(0)
            .chain((0..sub_units).map(|i| self.exp(i * step)))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> u64 {
        let n = self.n_units() as u64;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    pub fn is_primitive_element(&self, a: u32) -> bool {
        a != 0 && self.mult_order(a) == self.n_units() as u64
    }

    fn check(&self, x: FieldElement) -> Result<u32> {
        if x.ctx != self.id {
            return Err(Error::ContextMismatch {
                left: self.id,
                right: x.ctx,
            });
        }
        Ok(x.v)
    }

    pub fn add_el(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.el(self.add(self.check(x)?, self.check(y)?)))
    }
    pub fn sub_el(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.el(self.sub(self.check(x)?, self.check(y)?)))
    }
    pub fn mul_el(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.el(self.mul(self.check(x)?, self.check(y)?)))
    }
    pub fn inv_el(&self, x: FieldElement) -> Result<FieldElement> {
        let v = self.check(x)?;
        if v == 0 {
            return Err(Error::OutOfRange {
                what: "inverse of zero",
                value: 0,
            });
        }
        Ok(self.el(self.inv(v)))
    }
    pub fn pow_el(&self, x: FieldElement, e: u64) -> Result<FieldElement> {
        Ok(self.el(self.pow(self.check(x)?, e)))
    }
    pub fn frobenius_el(&self, x: FieldElement, e: u32, base: u32) -> Result<FieldElement> {
        Ok(self.el(self.frobenius(self.check(x)?, e, base)))
    }
    pub fn trace_map(&self, x: FieldElement, from: u32, to: u32) -> Result<FieldElement> {
        Ok(self.el(self.trace_map_raw(self.check(x)?, from, to)?))
    }
    pub fn subfield_members(&self, degree: u32) -> Result<Vec<FieldElement>> {
        Ok(self
            .subfield_members_raw(degree)?
            .into_iter()
            .map(|v| self.el(v))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_fields() -> Vec<(u32, u32)> {
        vec![
            (2, 1),
            (2, 4),
            (2, 8),
            (3, 1),
            (3, 2),
            (3, 4),
            (5, 2),
            (7, 2),
            (11, 2),
            (2, 12),
            (3, 8),
        ]
    }

    #[test]
    fn gf256_uses_conway_modulus() {
        let f = field_new(2, 8).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
        assert_eq!(f.modulus_source(), ModulusSource::Conway);
        assert_eq!(f.order(), 256);
        assert_eq!(f.mult_order(f.primitive()), 255);
    }

    #[test]
    fn prime_field_primitive() {
        let f = field_new(3, 1).unwrap();
        assert_eq!(f.primitive(), 2);
        assert_eq!(f.order(), 3);
        let f5 = field_new(5, 8).unwrap();
        assert_eq!(f5.order(), 390625);
    }

    #[test]
    fn cap_and_validation() {
        assert!(matches!(field_new(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(
            field_with_cap(2, 20, 1 << 16),
            Err(Error::CapExceeded { .. })
        ));
        assert!(field_new(2, 0).is_err());
    }

    #[test]
    fn primitive_order_is_full() {
        for (p, m) in small_fields() {
            let f = field_new(p, m).unwrap();
            assert_eq!(
                f.mult_order(f.primitive()),
                f.n_units() as u64,
                "GF({p}^{m})"
            );
        }
    }

    #[test]
    fn table_and_polynomial_products_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m) in small_fields() {
            let f = field_new(p, m).unwrap();
            for _ in 0..10_000 {
                let a = rng.gen_range(0..f.order());
                let b = rng.gen_range(0..f.order());
                assert_eq!(f.mul(a, b), f.mul_poly_basis(a, b));
            }
        }
    }

    #[test]
    fn zech_identity() {
        for (p, m) in [(3, 4), (2, 8), (5, 2)] {
            let f = field_new(p, m).unwrap();
            for i in 0..f.n_units() {
                let lhs = f.add(1, f.exp(i as u64));
                match f.zech(i) {
                    Some(z) => assert_eq!(f.exp(z as u64), lhs),
                    None => assert_eq!(lhs, 0),
                }
            }
        }
    }

    #[test]
    fn addition_matches_digits() {
        let f = field_new(5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5000 {
            let a = rng.gen_range(0..f.order());
            let b = rng.gen_range(0..f.order());
            assert_eq!(f.add(a, b), f.add_digits(a, b));
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }

    #[test]
    fn frobenius_cases() {
        let f4 = field_new(2, 2).unwrap();
        let x = f4.primitive();
        let y = f4.frobenius(x, 1, 1);
        assert_ne!(x, y);
        assert_eq!(f4.frobenius(y, 1, 1), x);
        assert_eq!(f4.frobenius(0, 3, 1), 0);
        let f81 = field_new(3, 4).unwrap();
        for x in 0..f81.order() {
            assert_eq!(f81.frobenius(x, 4, 1), x);
        }
    }

    #[test]
    fn trace_matches_direct_sum() {
        let f = field_new(3, 4).unwrap();
        for x in 0..f.order() {
            let direct = [1u64, 3, 9, 27]
                .iter()
                .fold(0, |acc, &e| f.add(acc, f.pow(x, e)));
            assert_eq!(f.trace_map_raw(x, 4, 1).unwrap(), direct);
        }
        let f16 = field_new(2, 4).unwrap();
        assert_eq!(f16.trace_map_raw(1, 4, 1).unwrap(), 0);
        assert!(f16.trace_map_raw(1, 4, 3).is_err());
    }

    #[test]
    fn subfields() {
        let f = field_new(2, 8).unwrap();
        assert_eq!(f.subfield_members_raw(1).unwrap(), vec![0, 1]);
        assert_eq!(f.subfield_members_raw(8).unwrap().len(), 256);
        let s = f.subfield_members_raw(4).unwrap();
        assert_eq!(s.len(), 16);
        for &a in &s {
            assert!(f.is_in_subfield(a, 4));
            for &b in &s {
                assert!(s.binary_search(&f.add(a, b)).is_ok());
                assert!(s.binary_search(&f.mul(a, b)).is_ok());
            }
        }
        assert!(f.subfield_members_raw(3).is_err());
    }

    #[test]
    fn checked_ops_reject_foreign_elements() {
        let a = field_new(2, 4).unwrap();
        let b = field_new(3, 2).unwrap();
        assert!(matches!(
            a.add_el(a.one(), b.one()),
            Err(Error::ContextMismatch { .. })
        ));
        assert!(a.inv_el(a.zero()).is_err());
    }

    proptest! {
        #[test]
        fn frobenius_is_additive(p_idx in 0usize..4, a in any::<u32>(), b in any::<u32>()) {
            let (p, m) = [(2, 8), (3, 4), (5, 4), (7, 2)][p_idx];
            let f = field_new(p, m).unwrap();
            let (a, b) = (a % f.order(), b % f.order());
            let lhs = f.pow(f.add(a, b), p as u64);
            let rhs = f.add(f.pow(a, p as u64), f.pow(b, p as u64));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn trace_lands_in_subfield(a in any::<u32>(), to in prop::sample::select(vec![1u32, 2, 4])) {
            let f = field_new(2, 8).unwrap();
            let t = f.trace_map_raw(a % f.order(), 8, to).unwrap();
            prop_assert!(f.is_in_subfield(t, to));
        }

        #[test]
        fn field_axioms(a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let f = field_new(3, 4).unwrap();
            let (a, b, c) = (a % 81, b % 81, c % 81);
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
