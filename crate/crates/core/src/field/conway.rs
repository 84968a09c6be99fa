//! Selection of defining polynomials.
//!
//! A compiled-in table of Conway polynomials covers the fields the constructions
//! need. Other `(p, m)` fall back to the least primitive polynomial in a fixed
//! order. `TRACECODE_CONWAY_DIR` may point at a directory of files with lines
//! `[p,m,[c0,c1,...,cm]]` that take precedence over the table.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use super::gfp_poly;
use crate::error::{Error, Result};

pub const CONWAY_DIR_ENV: &str = "TRACECODE_CONWAY_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusSource {
    Conway,
    Override,
    LeastPrimitive,
}

/// Conway polynomials, coefficients low to high.
const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 4, &[2, 10, 8, 0, 1]),
];

pub fn compiled_table() -> impl Iterator<Item = (u32, u32, &'static [u32])> {
    TABLE.iter().copied()
}

fn overrides() -> &'static HashMap<(u32, u32), Vec<u32>> {
    static OVR: OnceLock<HashMap<(u32, u32), Vec<u32>>> = OnceLock::new();
    OVR.get_or_init(|| match std::env::var_os(CONWAY_DIR_ENV) {
        Some(dir) => load_dir(std::path::Path::new(&dir)).unwrap_or_default(),
        None => HashMap::new(),
    })
}

/// Parses Lübeck-style entries `[p,m,[c0,...,cm]]`, one per line. Lines that
/// are not entries (headers, brackets) are skipped.
pub fn parse_entries(text: &str) -> HashMap<(u32, u32), Vec<u32>> {
    let mut out = HashMap::new();
    for line in text.lines() {
        let s = line.trim().trim_end_matches(';').trim_end_matches(',');
        if let Ok((p, m, c)) = serde_json::from_str::<(u32, u32, Vec<u32>)>(s) {
            out.insert((p, m), c);
        }
    }
    out
}

fn load_dir(dir: &std::path::Path) -> Result<HashMap<(u32, u32), Vec<u32>>> {
    let mut out = HashMap::new();
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    paths.sort();
    for path in paths.into_iter().filter(|p| p.is_file()) {
        out.extend(parse_entries(&std::fs::read_to_string(path)?));
    }
    Ok(out)
}

/// The modulus used for GF(p^m) together with where it came from.
pub fn modulus_for(p: u32, m: u32) -> Result<(Vec<u32>, ModulusSource)> {
    if let Some(c) = overrides().get(&(p, m)) {
        if c.len() != m as usize + 1 || !gfp_poly::is_primitive(c, p) {
            return Err(Error::InvalidModulus {
                p,
                m,
                reason: format!("override {c:?} is not primitive"),
            });
        }
        return Ok((c.clone(), ModulusSource::Override));
    }
    if let Some((_, _, c)) = TABLE.iter().find(|(tp, tm, _)| *tp == p && *tm == m) {
        return Ok((c.to_vec(), ModulusSource::Conway));
    }
    least_primitive(p, m).map(|c| (c, ModulusSource::LeastPrimitive))
}

/// Least monic primitive polynomial of degree `m`, ordering candidates by the
/// integer `Σ c_i p^i` of their lower coefficients.
pub fn least_primitive(p: u32, m: u32) -> Result<Vec<u32>> {
    let count = (p as u64)
        .checked_pow(m)
        .ok_or(Error::Overflow("candidate count"))?;
    for code in 1..count {
        let mut c = Vec::with_capacity(m as usize + 1);
        let mut v = code;
        for _ in 0..m {
            c.push((v % p as u64) as u32);
            v /= p as u64;
        }
        c.push(1);
        if c[0] != 0 && gfp_poly::is_primitive(&c, p) {
            return Ok(c);
        }
    }
    Err(Error::Internal(format!(
        "no primitive polynomial of degree {m} over GF({p})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gfp_poly::{compose_mod, pow_mod, rem};

    /// Candidate number `k` in Conway order: `a_{m-1}` most significant, with
    /// `c_i = (-1)^{m-i} a_i`.
    fn conway_candidate(p: u32, m: u32, mut k: u64) -> Vec<u32> {
        let mut a = vec![0u32; m as usize];
        for ai in a.iter_mut() {
            *ai = (k % p as u64) as u32;
            k /= p as u64;
        }
        let mut c: Vec<u32> = (0..m as usize)
            .map(|i| {
                if (m as usize - i).is_multiple_of(2) {
                    a[i]
                } else {
                    (p - a[i]) % p
                }
            })
            .collect();
        c.push(1);
        c
    }

    fn brute_conway(p: u32, m: u32, cache: &mut HashMap<(u32, u32), Vec<u32>>) -> Vec<u32> {
        if let Some(c) = cache.get(&(p, m)) {
            return c.clone();
        }
        let divisors: Vec<u32> = (1..m).filter(|d| m.is_multiple_of(*d)).collect();
        let subs: Vec<(u32, Vec<u32>)> = divisors
            .iter()
            .map(|&d| (d, brute_conway(p, d, cache)))
            .collect();
        let n = (p as u128).pow(m) - 1;
        let mut k = 0u64;
        let found = loop {
            let f = conway_candidate(p, m, k);
            k += 1;
            if !gfp_poly::is_primitive(&f, p) {
                continue;
            }
            let ok = subs.iter().all(|(d, fd)| {
                let e = n / ((p as u128).pow(*d) - 1);
                let y = pow_mod(&[0, 1], e, &f, p);
                compose_mod(fd, &y, &f, p).is_empty()
            });
            if ok {
                break f;
            }
        };
        cache.insert((p, m), found.clone());
        found
    }

    #[test]
    fn compiled_table_matches_brute_force_conway() {
        let mut cache = HashMap::new();
        for (p, m, c) in compiled_table() {
            assert_eq!(
                brute_conway(p, m, &mut cache),
                c,
                "Conway polynomial for ({p},{m})"
            );
        }
    }

    #[test]
    fn least_primitive_small_cases() {
        // X^2 + X + 1 is the only primitive quadratic over GF(2).
        assert_eq!(least_primitive(2, 2).unwrap(), vec![1, 1, 1]);
        let c = least_primitive(13, 2).unwrap();
        assert!(gfp_poly::is_primitive(&c, 13));
        assert_eq!(rem(&c, &c, 13), Vec::<u32>::new());
    }

    #[test]
    fn parses_luebeck_lines() {
        let text = "allConwayPolynomials := [\n[2,1,[1,1]],\n[3,2,[2,2,1]],\nbogus\n0];";
        let e = parse_entries(text);
        assert_eq!(e.get(&(3, 2)), Some(&vec![2, 2, 1]));
        assert_eq!(e.len(), 2);
    }
}
