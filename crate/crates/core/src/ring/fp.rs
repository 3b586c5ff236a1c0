//! Prime field scalars with a runtime modulus.

use crate::error::{CaError, Result};

/// Trial-division primality check. Moduli are small (p <= 2^31 assumed).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A fully reduced residue in `[0, p)` for a prime modulus `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    modulus: u64,
}

impl FpScalar {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(CaError::Domain(format!("{modulus} is not prime")));
        }
        Ok(Self::reduced(value, modulus))
    }

    /// Reduce an integer into `[0, p)`; the modulus must already be known prime.
    pub fn reduced(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        let v = ((value % m) + m) % m;
        FpScalar {
            value: v as u64,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        FpScalar { value: 0, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        FpScalar {
            value: 1 % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(CaError::RingMismatch(format!(
                "moduli {} and {}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FpScalar {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FpScalar {
            value: (self.value + self.modulus - other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FpScalar {
            value: (self.value * other.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn neg(&self) -> Self {
        FpScalar {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.value % self.modulus;
        let mut acc = 1u64 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            e >>= 1;
        }
        FpScalar {
            value: acc,
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(CaError::Domain(format!(
                "0 is not invertible mod {}",
                self.modulus
            )));
        }
        Ok(self.pow(self.modulus - 2))
    }

    /// Euler's criterion; always true for p = 2.
    pub fn is_square(&self) -> bool {
        if self.modulus == 2 || self.value == 0 {
            return true;
        }
        self.pow((self.modulus - 1) / 2).value == 1
    }

    /// A square root in F_p, if one exists (Tonelli-Shanks).
    pub fn sqrt(&self) -> Option<Self> {
        let p = self.modulus;
        if p == 2 || self.value == 0 {
            return Some(*self);
        }
        if !self.is_square() {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow((p + 1) / 4));
        }
        // Tonelli-Shanks for p = 1 mod 4.
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = FpScalar { value: 2, modulus: p };
        while z.is_square() {
            z = FpScalar {
                value: z.value + 1,
                modulus: p,
            };
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow((q + 1) / 2);
        while t.value != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2.mul(&t2).unwrap();
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b.mul(&b).unwrap();
            t = t.mul(&c).unwrap();
            r = r.mul(&b).unwrap();
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(31));
        assert!(!is_prime(1));
        assert!(!is_prime(9));
        assert!(!is_prime(91));
    }

    #[test]
    fn arithmetic_mod_7() {
        let a = FpScalar::new(5, 7).unwrap();
        let b = FpScalar::new(-3, 7).unwrap();
        assert_eq!(b.value(), 4);
        assert_eq!(a.add(&b).unwrap().value(), 2);
        assert_eq!(a.mul(&b).unwrap().value(), 6);
        assert_eq!(a.inv().unwrap().mul(&a).unwrap().value(), 1);
    }

    #[test]
    fn modulus_mismatch_rejected() {
        let a = FpScalar::new(1, 3).unwrap();
        let b = FpScalar::new(1, 5).unwrap();
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn nonprime_modulus_rejected() {
        assert!(FpScalar::new(1, 6).is_err());
    }

    #[test]
    fn square_roots() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            for v in 0..p {
                let a = FpScalar::new(v as i64, p).unwrap();
                match a.sqrt() {
                    Some(r) => assert_eq!(r.mul(&r).unwrap(), a),
                    None => assert!(!a.is_square()),
                }
            }
        }
    }
}
