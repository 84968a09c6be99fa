//! Dense polynomials over a prime field GF(p), coefficients low to high.
//!
//! Used to vet field moduli (irreducibility, primitivity, Conway
//! compatibility) before any table is built.

use crate::arith::prime_factors;

pub type Poly = Vec<u32>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

pub fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

pub fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo a nonzero `f`.
pub fn rem(a: &[u32], f: &[u32], p: u32) -> Poly {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r: Vec<u64> = trim(a.to_vec()).into_iter().map(u64::from).collect();
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p as u64;
        if c != 0 {
            let shift = top - df;
            for (i, &fc) in f.iter().enumerate().take(df + 1) {
                let sub = c * fc as u64 % p as u64;
                r[shift + i] = (r[shift + i] + p as u64 - sub) % p as u64;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub fn pow_mod(base: &[u32], mut e: u128, f: &[u32], p: u32) -> Poly {
    let mut result: Poly = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Evaluates `f` at the polynomial `x` modulo `modulus`.
pub fn compose_mod(f: &[u32], x: &[u32], modulus: &[u32], p: u32) -> Poly {
    let mut acc: Poly = Vec::new();
    for &c in f.iter().rev() {
        acc = mul_mod(&acc, x, modulus, p);
        acc = trim({
            let mut v = acc.clone();
            if v.is_empty() {
                v.push(0);
            }
            v[0] = (v[0] + c) % p;
            v
        });
    }
    acc
}

/// `X^(p^k) mod f`.
fn x_pow_p_k(f: &[u32], p: u32, k: u32) -> Poly {
    let mut x: Poly = rem(&[0, 1], f, p);
    for _ in 0..k {
        x = pow_mod(&x, p as u128, f, p);
    }
    x
}

/// Rabin's test: `f | X^(p^m) - X` and `gcd(f, X^(p^(m/r)) - X) = 1` for
/// each prime `r | m`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(m) = degree(f) else { return false };
    if m == 0 {
        return false;
    }
    let m = m as u32;
    let x: Poly = vec![0, 1];
    let full = sub(&x_pow_p_k(f, p, m), &rem(&x, f, p), p);
    if !full.is_empty() {
        return false;
    }
    for r in prime_factors(m as u64) {
        let h = sub(&x_pow_p_k(f, p, m / r as u32), &x, p);
        let g = gcd(f, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// `f` irreducible and `X` of multiplicative order `p^m - 1` modulo `f`.
pub fn is_primitive(f: &[u32], p: u32) -> bool {
    if !is_irreducible(f, p) {
        return false;
    }
    let m = degree(f).unwrap() as u32;
    let order = (p as u128).pow(m) - 1;
    let x: Poly = vec![0, 1];
    let one = rem(&[1], f, p);
    if pow_mod(&x, order, f, p) != one {
        return false;
    }
    prime_factors(order as u64)
        .into_iter()
        .all(|r| pow_mod(&x, order / r as u128, f, p) != one)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_on_known_polynomials() {
        // X^8+X^4+X^3+X^2+1 is primitive; X^8+X^4+X^3+X+1 is irreducible but not primitive.
        assert!(is_primitive(&[1, 0, 1, 1, 1, 0, 0, 0, 1], 2));
        let aes = [1, 1, 0, 1, 1, 0, 0, 0, 1];
        assert!(is_irreducible(&aes, 2));
        assert!(!is_primitive(&aes, 2));
        // X^2 + 1 over GF(3) is irreducible of order 4, not primitive.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_primitive(&[1, 0, 1], 3));
        // (X+1)^2 over GF(3)
        assert!(!is_irreducible(&[1, 2, 1], 3));
        // X^4+X^2+1 = (X^2+X+1)^2 over GF(2)
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn gcd_and_rem() {
        // (X+1)(X+2) and (X+1)(X+3) over GF(5)
        let a = mul(&[1, 1], &[2, 1], 5);
        let b = mul(&[1, 1], &[3, 1], 5);
        let g = gcd(&a, &b, 5);
        assert_eq!(degree(&g), Some(1));
        assert!(rem(&a, &g, 5).is_empty());
    }
}
