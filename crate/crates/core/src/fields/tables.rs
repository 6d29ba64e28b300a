//! Log/antilog tables for finite extension fields.
//!
//! Elements are coded by their index in the lexicographic enumeration of
//! coefficient lists. Read in base `p` that index is the flattened
//! coordinate vector over the prime field, so addition is digit-wise.

use crate::error::{violation, Result};

pub(super) struct Tables {
    p: u64,
    digits: u32,
    q: u64,
    // exp has 2(q-1) entries so a product of two logs never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    pub(super) fn build(p: u64, digits: u32, q: u64, slow_mul: impl Fn(u64, u64) -> u64) -> Result<Self> {
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; q as usize];
        let mut found = q == 2;
        exp[0] = 1;
        let candidates = if q > 2 { 2..q } else { 0..0 };
        'candidates: for g in candidates {
            let mut x = 1u64;
            #[allow(clippy::needless_range_loop)]
            for i in 0..order {
                exp[i] = x as u32;
                x = slow_mul(x, g);
                if x == 1 && i + 1 < order {
                    continue 'candidates;
                }
            }
            if x == 1 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(violation("no primitive element: modulus is not irreducible"));
        }
        for i in 0..order {
            exp[order + i] = exp[i];
            log[exp[i] as usize] = i as u32;
        }
        Ok(Tables { p, digits, q, exp, log })
    }

    pub(super) fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (p, mut a, mut b) = (self.p, a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.digits {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub(super) fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let (p, mut a) = (self.p, a);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.digits {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub(super) fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize] as u64
    }

    pub(super) fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a as usize] as u64;
        Some(self.exp[((order - l) % order) as usize] as u64)
    }
}
