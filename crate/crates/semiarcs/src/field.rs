//! Exact arithmetic in GF(p^r).
//!
//! Elements are dense indices `0..q`: the base-p digits of an index are the
//! coefficients (constant term first) of the polynomial representative, so
//! `0` is zero, `1` is one, and `p` is the adjoined root `x`. Multiplication
//! goes through log/antilog tables for a fixed generator; addition is
//! componentwise mod p (table-backed for small fields).

use thiserror::Error;

/// Largest supported field order. Tables are dense, so this is a hard cap.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("invalid modulus: {0}")]
    ReducibleModulus(String),
    #[error("subgroup order {n} does not divide q-1 = {qm1}")]
    OrderDoesNotDivide { n: u32, qm1: u32 },
    #[error("subfield degree {d} does not divide extension degree {r}")]
    DegreeDoesNotDivide { d: u32, r: u32 },
    #[error("basis is linearly dependent over GF(p^{d})")]
    DependentBasis { d: u32 },
    #[error("order p^r = {q} exceeds the supported maximum {max}", max = MAX_ORDER)]
    OrderTooLarge { q: u64 },
    #[error("{0} is not a prime power")]
    NotAPrimePower(u32),
}

/// GF(p^r) with dense element indices and precomputed arithmetic tables.
///
/// Immutable after construction; share it freely across threads.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FiniteField {
    /// Builds GF(p^r) with the canonical modulus: the lexicographically
    /// smallest monic irreducible of degree r over GF(p), coefficients
    /// compared constant-term first.
    pub fn new(p: u32, r: u32) -> Result<Self, FieldError> {
        check_p_r(p, r)?;
        let modulus = canonical_modulus(p, r);
        Self::from_validated_modulus(p, r, modulus)
    }

    /// Builds GF(q) from the order alone by factoring q = p^r.
    pub fn for_order(q: u32) -> Result<Self, FieldError> {
        let (p, r) = split_prime_power(q).ok_or(FieldError::NotAPrimePower(q))?;
        Self::new(p, r)
    }

    /// Builds GF(p^r) with an explicit modulus (monic, degree r, irreducible
    /// over GF(p), coefficients constant-term first).
    pub fn with_modulus(p: u32, r: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        check_p_r(p, r)?;
        if modulus.len() != r as usize + 1 {
            return Err(FieldError::ReducibleModulus(format!(
                "expected {} coefficients for degree {r}, got {}",
                r + 1,
                modulus.len()
            )));
        }
        if modulus[r as usize] != 1 {
            return Err(FieldError::ReducibleModulus("modulus is not monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::ReducibleModulus(format!(
                "coefficient out of range for GF({p})"
            )));
        }
        if !poly_is_irreducible(modulus, p) {
            return Err(FieldError::ReducibleModulus(format!(
                "{modulus:?} factors over GF({p})"
            )));
        }
        Self::from_validated_modulus(p, r, modulus.to_vec())
    }

    fn from_validated_modulus(p: u32, r: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let q = p.pow(r); // fits: check_p_r capped p^r at MAX_ORDER

        // Multiplication of raw indices through the polynomial representation;
        // used only to bootstrap the log/antilog tables.
        let poly_mul_elems = |a: u32, b: u32| -> u32 {
            let prod = poly_mul(&index_digits(a, p, r), &index_digits(b, p, r), p);
            let rem = poly_rem(&prod, &modulus, p);
            digits_index(&rem, p)
        };

        let generator = find_generator(p, q, &poly_mul_elems);
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) {
            exp[i as usize] = cur;
            debug_assert_eq!(log[cur as usize], u32::MAX, "generator has order < q-1");
            log[cur as usize] = i;
            cur = poly_mul_elems(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        let add_table = (q <= 1024).then(|| {
            let n = q as usize;
            let mut t = vec![0u32; n * n];
            for a in 0..q {
                for b in a..q {
                    let s = add_digitwise(a, b, p, r);
                    t[a as usize * n + b as usize] = s;
                    t[b as usize * n + a as usize] = s;
                }
            }
            t
        });

        Ok(Self { p, r, q, modulus, generator, exp, log, add_table })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field order q = p^r.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; length r+1, leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The fixed generator of the multiplicative group backing the log tables
    /// (the smallest element index that has order q-1).
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => add_digitwise(a, b, self.p, self.r),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        // (p-1)·a, digit by digit.
        let mut out = 0u32;
        let (mut a, mut pw) = (a, 1u32);
        for _ in 0..self.r {
            let c = a % self.p;
            a /= self.p;
            out += ((self.p - c) % self.p) * pw;
            pw = pw.saturating_mul(self.p);
        }
        out
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
        let i = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(i % u64::from(self.q - 1)) as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert_ne!(a, 0, "inverse of zero");
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let e = (u64::from(self.log[a as usize]) * (k % u64::from(self.q - 1)))
            % u64::from(self.q - 1);
        self.exp[e as usize]
    }

    /// Discrete log base `generator()`; panics on zero.
    pub fn log(&self, a: u32) -> u32 {
        assert_ne!(a, 0, "log of zero");
        self.log[a as usize]
    }

    /// Frobenius automorphism x ↦ x^p.
    #[inline]
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, u64::from(self.p))
    }

    /// Iterated Frobenius x ↦ x^{p^e}.
    pub fn frobenius_pow(&self, a: u32, e: u32) -> u32 {
        let mut x = a;
        for _ in 0..(e % self.r.max(1)) {
            x = self.frobenius(x);
        }
        x
    }

    /// Base-p digits of an element index, constant coefficient first.
    pub fn digits_of(&self, a: u32) -> Vec<u32> {
        index_digits(a, self.p, self.r)
    }

    pub fn element_from_digits(&self, digits: &[u32]) -> u32 {
        assert!(digits.len() <= self.r as usize);
        digits_index(digits, self.p)
    }

    /// Sorted elements of the subfield GF(p^d) inside this field.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<u32>, FieldError> {
        if d == 0 || self.r % d != 0 {
            return Err(FieldError::DegreeDoesNotDivide { d, r: self.r });
        }
        let sub_order = self.p.pow(d);
        let mut out = vec![0u32];
        if self.q > 1 {
            let step = (self.q - 1) / (sub_order - 1);
            out.extend((0..sub_order - 1).map(|i| self.exp[(i * step) as usize]));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The nonzero squares {x² : x ≠ 0}, sorted. For even q this is every
    /// nonzero element; for odd q, the index-2 multiplicative subgroup.
    pub fn squares(&self) -> Vec<u32> {
        let mut out: Vec<u32> = (1..self.q).map(|x| self.mul(x, x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The unique multiplicative subgroup of order n (requires n | q-1).
    pub fn mult_subgroup(&self, n: u32) -> Result<MultSubgroup, FieldError> {
        let qm1 = self.q - 1;
        if n == 0 || qm1 % n != 0 {
            return Err(FieldError::OrderDoesNotDivide { n, qm1 });
        }
        let g = self.exp[(qm1 / n) as usize % qm1 as usize];
        let mut elements: Vec<u32> = (0..n).map(|k| self.exp[(k * (qm1 / n)) as usize]).collect();
        elements.sort_unstable();
        Ok(MultSubgroup { n, elements, generator: g })
    }

    /// The GF(p^d)-subspace spanned by `basis` (an additive subgroup of order
    /// p^{d·|basis|}). An empty basis yields {0}.
    pub fn add_subgroup(&self, d: u32, basis: &[u32]) -> Result<AddSubgroup, FieldError> {
        if d == 0 || self.r % d != 0 {
            return Err(FieldError::DegreeDoesNotDivide { d, r: self.r });
        }
        let scalars = self.subfield_elements(d)?;
        let mut elements = vec![0u32];
        for &b in basis {
            // span ← span + K·b, one basis vector at a time
            let mut next = Vec::with_capacity(elements.len() * scalars.len());
            for &k in &scalars {
                let kb = self.mul(k, b);
                next.extend(elements.iter().map(|&e| self.add(e, kb)));
            }
            next.sort_unstable();
            next.dedup();
            if next.len() != elements.len() * scalars.len() {
                return Err(FieldError::DependentBasis { d });
            }
            elements = next;
        }
        let h1 = basis.len() as u32;
        Ok(AddSubgroup { d, h1, h: d * h1, basis: basis.to_vec(), elements })
    }
}

/// A multiplicative subgroup of GF(q)*: the unique subgroup of order n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultSubgroup {
    pub n: u32,
    /// Sorted element indices.
    pub elements: Vec<u32>,
    /// An element of order exactly n.
    pub generator: u32,
}

impl MultSubgroup {
    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// An additive subgroup of GF(q) that is a GF(p^d)-subspace of dimension h1,
/// so of order p^h with h = d·h1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddSubgroup {
    pub d: u32,
    pub h1: u32,
    pub h: u32,
    pub basis: Vec<u32>,
    /// Sorted element indices; length p^h.
    pub elements: Vec<u32>,
}

impl AddSubgroup {
    pub fn order(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Whether A·B ⊆ B, the invariance condition tying a multiplicative
    /// subgroup A to this additive subgroup.
    pub fn is_invariant_under(&self, f: &FiniteField, a: &MultSubgroup) -> bool {
        a.elements
            .iter()
            .all(|&x| self.elements.iter().all(|&b| self.contains(f.mul(x, b))))
    }
}

/// Factors q as p^r with p prime, or None when q is not a prime power ≥ 2.
pub(crate) fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).find(|&d| q % d == 0).expect("q >= 2 has a least factor");
    let mut rest = q;
    let mut r = 0;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

fn check_p_r(p: u32, r: u32) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NonPrimeCharacteristic(p));
    }
    if r == 0 {
        return Err(FieldError::ReducibleModulus("extension degree must be ≥ 1".into()));
    }
    let q = (0..r).try_fold(1u64, |a, _| {
        let next = a * u64::from(p);
        (next <= MAX_ORDER).then_some(next)
    });
    if q.is_none() {
        return Err(FieldError::OrderTooLarge {
            q: (0..r).fold(1u64, |a, _| a.saturating_mul(u64::from(p))),
        });
    }
    Ok(())
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn add_digitwise(a: u32, b: u32, p: u32, r: u32) -> u32 {
    let (mut a, mut b, mut pw, mut out) = (a, b, 1u32, 0u32);
    for _ in 0..r {
        out += ((a % p + b % p) % p) * pw;
        a /= p;
        b /= p;
        pw = pw.saturating_mul(p);
    }
    out
}

fn index_digits(mut a: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(a % p);
        a /= p;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn digits_index(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Polynomial product over GF(p), coefficients constant-term first.
fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of a by the monic m, over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = i + shift;
                a[idx] = (a[idx] + (p - lead % p) % p * c) % p;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Irreducibility over GF(p) by trial division with every monic polynomial
/// of degree up to deg(f)/2.
fn poly_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut g = index_digits_fixed(idx, p, k);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn index_digits_fixed(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push(a % p);
        a /= p;
    }
    out
}

/// Lexicographically smallest monic irreducible of degree r over GF(p),
/// comparing coefficient vectors constant-term first.
fn canonical_modulus(p: u32, r: u32) -> Vec<u32> {
    let digits = r as usize;
    let total = p.pow(r);
    for idx in 0..total {
        // idx encodes (c0, c1, ..., c_{r-1}) with c0 the most significant
        // digit, so ascending idx is ascending lex order read low-to-high.
        let mut coeffs = vec![0u32; digits + 1];
        let mut a = idx;
        for i in (0..digits).rev() {
            coeffs[i] = a % p;
            a /= p;
        }
        coeffs[digits] = 1;
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible of degree {r} over GF({p}) always exists")
}

/// Smallest element index generating the full multiplicative group.
fn find_generator(p: u32, q: u32, mul: &dyn Fn(u32, u32) -> u32) -> u32 {
    if q == 2 {
        return 1;
    }
    let qm1 = q - 1;
    let prime_factors = {
        let mut n = qm1;
        let mut fs = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                fs.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            fs.push(n);
        }
        fs
    };
    let pow = |mut base: u32, mut e: u32| -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    (2..q)
        .find(|&cand| prime_factors.iter().all(|&f| pow(cand, qm1 / f) != 1))
        .unwrap_or_else(|| panic!("no generator found for q = {q} (p = {p})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive schoolbook multiplication straight from the definition, kept
    /// independent of the table bootstrap path above on purpose.
    fn oracle_mul(f: &FiniteField, a: u32, b: u32) -> u32 {
        let p = f.p();
        let (da, db) = (f.digits_of(a), f.digits_of(b));
        if da.is_empty() || db.is_empty() {
            return 0;
        }
        let mut prod = vec![0u32; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // long division by the modulus
        let m = f.modulus();
        while prod.len() > m.len() - 1 {
            let lead = *prod.last().unwrap();
            let shift = prod.len() - m.len();
            for (i, &c) in m.iter().enumerate() {
                prod[i + shift] = (prod[i + shift] + (p - lead) % p * c) % p;
            }
            while prod.last() == Some(&0) {
                prod.pop();
            }
        }
        f.element_from_digits(&prod)
    }

    fn small_fields() -> Vec<FiniteField> {
        [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (5, 2), (3, 3)]
            .iter()
            .map(|&(p, r)| FiniteField::new(p, r).unwrap())
            .collect()
    }

    #[test]
    fn canonical_moduli_are_the_expected_polynomials() {
        // Frozen: lexicographically smallest monic irreducibles, comparing
        // coefficient vectors constant-term first. Hand-checked: each listed
        // polynomial is irreducible and every lex-smaller candidate factors.
        assert_eq!(FiniteField::new(2, 1).unwrap().modulus(), &[0, 1]); // x
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]); // x²+x+1
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]); // x³+x²+1
        assert_eq!(FiniteField::new(2, 4).unwrap().modulus(), &[1, 0, 0, 1, 1]); // x⁴+x³+1
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]); // x²+1
        assert_eq!(FiniteField::new(3, 3).unwrap().modulus(), &[1, 0, 2, 1]); // x³+2x²+1
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[1, 1, 1]); // x²+x+1
    }

    #[test]
    fn gf2_tables() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn non_prime_characteristic_rejected() {
        assert_eq!(FiniteField::new(6, 1).unwrap_err(), FieldError::NonPrimeCharacteristic(6));
        assert_eq!(FiniteField::new(1, 1).unwrap_err(), FieldError::NonPrimeCharacteristic(1));
    }

    #[test]
    fn explicit_modulus_validation() {
        // x² + 2 has roots ±1 over GF(3)
        assert!(matches!(
            FiniteField::with_modulus(3, 2, &[2, 0, 1]),
            Err(FieldError::ReducibleModulus(_))
        ));
        // x² + x + 2 is irreducible over GF(3); arithmetic must still be a field
        let f = FiniteField::with_modulus(3, 2, &[2, 1, 1]).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), oracle_mul(&f, a, b));
            }
        }
        // not monic
        assert!(FiniteField::with_modulus(3, 2, &[1, 0, 2]).is_err());
        // wrong degree
        assert!(FiniteField::with_modulus(3, 2, &[1, 1]).is_err());
    }

    #[test]
    fn multiplication_matches_naive_oracle() {
        for f in small_fields() {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), oracle_mul(&f, a, b), "q={} a={a} b={b}", f.q());
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_on_full_tables() {
        for f in small_fields().into_iter().filter(|f| f.q() <= 16) {
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.pow(a, u64::from(f.q() - 1)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn gf9_satisfies_frobenius_fixed_point_identity() {
        // x^9 = x for every x, with multiplication cross-checked by the oracle.
        let f = FiniteField::new(3, 2).unwrap();
        for x in f.elements() {
            let mut x9 = x;
            for _ in 0..8 {
                x9 = oracle_mul(&f, x9, x);
            }
            assert_eq!(if x == 0 { 0 } else { x9 }, x);
            assert_eq!(f.pow(x, 9), x);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_fixing_the_prime_field() {
        for f in small_fields() {
            let p = f.p();
            let mut fixed = Vec::new();
            for a in f.elements() {
                if f.frobenius(a) == a {
                    fixed.push(a);
                }
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                    assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                }
            }
            assert_eq!(fixed, (0..p).collect::<Vec<_>>(), "Frobenius must fix exactly GF(p)");
        }
    }

    #[test]
    fn generator_is_smallest_primitive_index() {
        // 2 has order 3 mod 7, so the generator is 3.
        assert_eq!(FiniteField::new(7, 1).unwrap().generator(), 3);
        // In GF(9) with modulus x²+1: 3 = x has order 4, 4 = 1+x has order 8.
        assert_eq!(FiniteField::new(3, 2).unwrap().generator(), 4);
    }

    #[test]
    fn mult_subgroup_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.mult_subgroup(1).unwrap().elements, vec![1]);
        assert_eq!(f7.mult_subgroup(3).unwrap().elements, vec![1, 2, 4]);
        assert_eq!(
            f7.mult_subgroup(5).unwrap_err(),
            FieldError::OrderDoesNotDivide { n: 5, qm1: 6 }
        );
    }

    #[test]
    fn mult_subgroup_is_kernel_of_power_map() {
        for f in small_fields() {
            let qm1 = f.q() - 1;
            for n in 1..=qm1 {
                if qm1 % n != 0 {
                    continue;
                }
                let sub = f.mult_subgroup(n).unwrap();
                let kernel: Vec<u32> =
                    (1..f.q()).filter(|&x| f.pow(x, u64::from(n)) == 1).collect();
                assert_eq!(sub.elements, kernel, "q={} n={n}", f.q());
                assert_eq!(sub.elements.len() as u32, n);
                // closure under product and inverse
                for &a in &sub.elements {
                    assert!(sub.contains(f.inv(a)));
                    for &b in &sub.elements {
                        assert!(sub.contains(f.mul(a, b)));
                    }
                }
                // generator order is exactly n
                let ord = (1..=n).find(|&k| f.pow(sub.generator, u64::from(k)) == 1).unwrap();
                assert_eq!(ord, n);
            }
        }
    }

    #[test]
    fn squares_of_gf5_and_gf7() {
        assert_eq!(FiniteField::new(5, 1).unwrap().squares(), vec![1, 4]);
        assert_eq!(FiniteField::new(7, 1).unwrap().squares(), vec![1, 2, 4]);
        // even characteristic: squaring is a bijection
        assert_eq!(FiniteField::new(2, 3).unwrap().squares(), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn subfield_elements_are_frobenius_fixed_points() {
        let f = FiniteField::new(2, 4).unwrap();
        for d in [1u32, 2, 4] {
            let sub = f.subfield_elements(d).unwrap();
            let expected: Vec<u32> =
                f.elements().filter(|&x| f.frobenius_pow(x, d) == x).collect();
            assert_eq!(sub, expected);
            assert_eq!(sub.len() as u32, f.p().pow(d));
        }
        assert_eq!(
            f.subfield_elements(3).unwrap_err(),
            FieldError::DegreeDoesNotDivide { d: 3, r: 4 }
        );
    }

    #[test]
    fn add_subgroup_prime_subfield_of_gf9() {
        let f = FiniteField::new(3, 2).unwrap();
        let b = f.add_subgroup(1, &[1]).unwrap();
        assert_eq!(b.elements, vec![0, 1, 2]);
        assert_eq!((b.d, b.h1, b.h), (1, 1, 1));
    }

    #[test]
    fn add_subgroup_full_field_as_gf4_subspace() {
        let f = FiniteField::new(2, 2).unwrap();
        let b = f.add_subgroup(2, &[1]).unwrap();
        assert_eq!(b.elements, vec![0, 1, 2, 3]);
        assert_eq!(b.h, 2);
    }

    #[test]
    fn add_subgroup_of_gf8_is_not_a_subfield() {
        let f = FiniteField::new(2, 3).unwrap();
        let g = f.generator();
        let b = f.add_subgroup(1, &[1, g]).unwrap();
        assert_eq!(b.order(), 4);
        // closed under addition by construction; check it is NOT closed under
        // multiplication (GF(8) has no subfield of order 4)
        let closed_mul = b
            .elements
            .iter()
            .all(|&x| b.elements.iter().all(|&y| b.contains(f.mul(x, y))));
        assert!(!closed_mul);
    }

    #[test]
    fn add_subgroup_rejects_bad_inputs() {
        let f8 = FiniteField::new(2, 3).unwrap();
        assert_eq!(
            f8.add_subgroup(2, &[1]).unwrap_err(),
            FieldError::DegreeDoesNotDivide { d: 2, r: 3 }
        );
        let f9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(f9.add_subgroup(1, &[1, 2]).unwrap_err(), FieldError::DependentBasis { d: 1 });
        // empty basis spans {0}
        assert_eq!(f9.add_subgroup(1, &[]).unwrap().elements, vec![0]);
    }

    #[test]
    fn add_subgroup_invariance_matches_divisibility_condition() {
        // B = GF(p^d)-subspace is invariant under A = mult_subgroup(n)
        // exactly when n | p^d - 1.
        let f = FiniteField::new(2, 4).unwrap();
        let b = f.add_subgroup(2, &[1]).unwrap(); // GF(4) inside GF(16)
        for n in [1u32, 3, 5, 15] {
            let a = f.mult_subgroup(n).unwrap();
            assert_eq!(b.is_invariant_under(&f, &a), 3 % n == 0, "n={n}");
        }
    }

    #[test]
    fn neg_is_scalar_multiple_rule() {
        for f in small_fields() {
            let pm1 = f.p() - 1;
            for a in f.elements() {
                assert_eq!(f.neg(a), f.mul(a, pm1 % f.q()));
            }
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(FiniteField::new(2, 21), Err(FieldError::OrderTooLarge { .. })));
    }
}
