//! Dense univariate polynomials over `F_q`, just enough to find roots of
//! quadratics and cubics without scanning the whole field.

use crate::field::{mul_mod, pow_mod};

type Poly = Vec<u64>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn inv(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

fn sub(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + q - y) % q
        })
        .collect();
    trim(out)
}

fn mul(a: &[u64], b: &[u64], q: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
fn rem(a: &[u64], m: &[u64], q: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let lead_inv = inv(*m.last().expect("nonzero modulus"), q);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let factor = mul_mod(*r.last().unwrap(), lead_inv, q);
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - mul_mod(factor, c, q)) % q;
        }
        r = trim(r);
    }
    r
}

fn gcd(a: &[u64], b: &[u64], q: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, q);
        a = b;
        b = r;
    }
    let lead_inv = inv(*a.last().expect("gcd of nonzero polys"), q);
    a.iter().map(|&c| mul_mod(c, lead_inv, q)).collect()
}

/// `base^e mod m`.
fn pow_rem(base: &[u64], mut e: u64, m: &[u64], q: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, q), m, q);
        }
        b = rem(&mul(&b, &b, q), m, q);
        e >>= 1;
    }
    acc
}

/// Roots in `F_q` (q odd prime) of a polynomial with ascending coefficients,
/// unsorted. Uses `gcd(f, x^q - x)` and deterministic equal-degree splitting.
pub(crate) fn roots_mod_prime(coeffs: &[u64], q: u64) -> Vec<u64> {
    let f = trim(coeffs.iter().map(|c| c % q).collect());
    if f.len() <= 1 {
        return Vec::new();
    }
    let xq = pow_rem(&[0, 1], q, &f, q);
    let split = gcd(&f, &sub(&xq, &[0, 1], q), q);
    let mut out = Vec::new();
    split_linear(split, q, &mut out);
    out
}

/// `g` is monic and a product of distinct linear factors.
fn split_linear(g: Poly, q: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((q - g[0]) % q),
        _ => {
            // (x + a)^((q-1)/2) - 1 separates residues from non-residues of the
            // shifted roots; some small shift always splits g nontrivially.
            for a in 0..q {
                let h = sub(&pow_rem(&[a, 1], (q - 1) / 2, &g, q), &[1], q);
                if h.is_empty() {
                    continue;
                }
                let d = gcd(&g, &h, q);
                if d.len() > 1 && d.len() < g.len() {
                    let rest = div_exact(&g, &d, q);
                    split_linear(d, q, out);
                    split_linear(rest, q, out);
                    return;
                }
            }
            unreachable!("equal-degree splitting always succeeds for q odd");
        }
    }
}

fn div_exact(a: &[u64], b: &[u64], q: u64) -> Poly {
    let mut r = a.to_vec();
    let lead_inv = inv(*b.last().unwrap(), q);
    let mut quot = vec![0u64; a.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = mul_mod(*r.last().unwrap(), lead_inv, q);
        quot[shift] = factor;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + q - mul_mod(factor, c, q)) % q;
        }
        r = trim(r);
    }
    trim(quot)
}
