use crate::error::DomainError;

/// Monic irreducible moduli for the non-prime fields of order at most 64,
/// as `(p, k, coefficients from x^0 up to x^k)`.
const MODULI: &[(usize, usize, &[usize])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

pub const MAX_ORDER: usize = 64;

/// `q = p^k` with `p` prime, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// The field `GF(q)` as addition/multiplication tables over `0..q`.
/// Element `e` encodes the polynomial whose base-`p` digits are its
/// coefficients (constant term first).
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: usize,
    pub k: usize,
    pub q: usize,
    /// Coefficients of the modulus (empty for prime fields).
    pub modulus: Vec<usize>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, DomainError> {
        let (p, k) =
            prime_power(q).ok_or_else(|| DomainError(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(DomainError(format!(
                "fields are supported up to order {MAX_ORDER}, got {q}"
            )));
        }
        let modulus: Vec<usize> = if k == 1 {
            Vec::new()
        } else {
            MODULI
                .iter()
                .find(|&&(mp, mk, _)| (mp, mk) == (p, k))
                .map(|&(_, _, c)| c.to_vec())
                .expect("modulus table covers every prime power up to 64")
        };
        let digits = |mut e: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = e % p;
                    e /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;
                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // Reduce modulo the monic modulus from the top degree down.
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, &m) in modulus.iter().enumerate() {
                            let idx = deg - k + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                    }
                }
                mul[a * q + b] = encode(&prod[..k]) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).ok_or_else(|| {
                DomainError(format!(
                    "element {a} has no inverse in the table for GF({q})"
                ))
            })? as u8;
        }
        let field = FiniteField {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        };
        field.check_axioms()?;
        Ok(field)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }

    /// Exhaustive check of the field axioms on the tables.
    fn check_axioms(&self) -> Result<(), DomainError> {
        let q = self.q;
        let fail = |what: &str| Err(DomainError(format!("GF({q}) tables violate {what}")));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail("identities");
            }
            if a != 0 && self.mul(a, self.inv[a] as usize) != 1 {
                return fail("inverses");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity");
                }
                if a != 0 && b != 0 && self.mul(a, b) == 0 {
                    return fail("absence of zero divisors");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return fail("associativity or distributivity");
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn every_supported_field_builds() {
        for q in 2..=MAX_ORDER {
            match prime_power(q) {
                Some(_) => {
                    let f = FiniteField::new(q).unwrap();
                    assert_eq!(f.q, q);
                    // The multiplicative group is cyclic of order q - 1.
                    let has_generator = (1..q).any(|g| {
                        let mut x = g;
                        let mut order = 1;
                        while x != 1 {
                            x = f.mul(x, g);
                            order += 1;
                        }
                        order == q - 1
                    });
                    assert!(has_generator, "GF({q})");
                }
                None => assert!(FiniteField::new(q).is_err()),
            }
        }
        assert!(FiniteField::new(81).is_err());
    }

    #[test]
    fn gf4_arithmetic() {
        let f = FiniteField::new(4).unwrap();
        // x * x = x + 1 modulo x^2 + x + 1; x is 2, x + 1 is 3.
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(2, 3), 1);
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.inv(0), None);
    }
}
