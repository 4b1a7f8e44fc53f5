//! Residue arithmetic in the prime field F_p.

use serde::Serialize;

use super::KernelError;

/// Largest characteristic accepted. Residues are `u32` and products are taken in `u64`.
pub const MAX_CHARACTERISTIC: u32 = 1 << 16;

/// The prime field F_p. Every stored residue lies in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self, KernelError> {
        if !is_prime(p) {
            return Err(KernelError::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC as u64 {
            return Err(KernelError::Argument(format!(
                "characteristic {p} exceeds the supported maximum {MAX_CHARACTERISTIC}"
            )));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Returns `Some(e)` when `q = p^e`.
    pub fn log_p(&self, q: u64) -> Option<u32> {
        if q == 0 {
            return None;
        }
        let mut e = 0;
        let mut r = q;
        while r % self.p as u64 == 0 {
            r /= self.p as u64;
            e += 1;
        }
        (r == 1).then_some(e)
    }

    /// Signed representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(matches!(FieldSpec::new(4), Err(KernelError::NotPrime(4))));
        assert!(matches!(FieldSpec::new(1), Err(KernelError::NotPrime(1))));
        assert!(FieldSpec::new(97).is_ok());
    }

    #[test]
    fn inverses_and_powers() {
        let f = FieldSpec::new(13).unwrap();
        for a in 1..13 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            // Fermat: a^p = a
            assert_eq!(f.pow(a, 13), a);
        }
        assert_eq!(f.from_i64(-1), 12);
        assert_eq!(f.signed(12), -1);
    }

    #[test]
    fn log_p_detects_prime_powers() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(f.log_p(1), Some(0));
        assert_eq!(f.log_p(27), Some(3));
        assert_eq!(f.log_p(6), None);
        assert_eq!(f.log_p(0), None);
    }
}
