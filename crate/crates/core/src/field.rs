//! Exact arithmetic in GF(q) for prime powers q up to 2^16.
//!
//! A [`Field`] owns the multiplicative structure (exp/log tables for small
//! orders, polynomial reduction above) and hands out [`Fe`] element values.
//! Elements are canonical integers in `[0, q)`; for extension fields the
//! integer encodes the coefficient vector of the residue polynomial in
//! base p, so for p = 2 addition is bitwise XOR of the representations.

use std::fmt;
use std::sync::Arc;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Field orders up to this bound get exp/log lookup tables.
const TABLE_BOUND: u32 = 1 << 8;

/// An element of GF(q), stored as its canonical representative in `[0, q)`.
///
/// `Fe` does not remember which field it came from; mixing elements of
/// different fields is the caller's responsibility, as all operations go
/// through a [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn value(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested order is not p^m for a prime p.
    NotPrimePower(u32),
    /// The requested order exceeds [`MAX_ORDER`].
    Overflow(u32),
    /// Inversion of the zero element.
    DivisionByZero,
    /// A value outside `[0, q)` was offered as an element.
    OutOfRange { value: u32, q: u32 },
    /// A reduction polynomial in a file does not match the canonical one.
    ReductionPolyMismatch { expected: Vec<u32>, found: Vec<u32> },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::Overflow(q) => write!(f, "field order {q} exceeds the supported bound {MAX_ORDER}"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::OutOfRange { value, q } => write!(f, "value {value} is not a canonical element of GF({q})"),
            FieldError::ReductionPolyMismatch { expected, found } => write!(
                f,
                "reduction polynomial {found:?} does not match the canonical choice {expected:?}"
            ),
        }
    }
}

impl std::error::Error for FieldError {}

struct FieldInner {
    q: u32,
    p: u32,
    m: u32,
    /// Coefficients of the reduction polynomial, ascending degree, length m+1.
    /// Empty for prime fields.
    poly: Vec<u32>,
    /// exp[i] = g^i for a fixed generator g, doubled so that
    /// exp[log a + log b] never needs a modular reduction. Empty above
    /// [`TABLE_BOUND`].
    exp: Vec<u16>,
    /// log[a] for a in 1..q. log[0] is unused.
    log: Vec<u16>,
}

/// A concrete GF(q). Cheap to clone and safe to share across threads;
/// all state is immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl Field {
    /// Constructs GF(q). Fails unless q = p^m for a prime p, 2 <= q <= 2^16.
    ///
    /// For m > 1 the reduction polynomial is the lexicographically first
    /// monic irreducible of degree m over GF(p) (coefficients compared as
    /// the base-p integer they encode), so every run of the library agrees
    /// on the representation.
    pub fn new(q: u32) -> Result<Field, FieldError> {
        if q > MAX_ORDER {
            return Err(FieldError::Overflow(q));
        }
        let (p, m) = factor_prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let poly = if m == 1 {
            Vec::new()
        } else {
            first_irreducible(p, m)
        };

        let mut inner = FieldInner {
            q,
            p,
            m,
            poly,
            exp: Vec::new(),
            log: Vec::new(),
        };

        if q <= TABLE_BOUND {
            let g = find_generator(&inner);
            let mut exp = vec![0u16; 2 * (q as usize - 1)];
            let mut log = vec![0u16; q as usize];
            let mut acc = Fe::ONE;
            for i in 0..(q as usize - 1) {
                exp[i] = acc.0;
                exp[i + q as usize - 1] = acc.0;
                log[acc.0 as usize] = i as u16;
                acc = mul_direct(&inner, acc, g);
            }
            inner.exp = exp;
            inner.log = log;
        }

        Ok(Field(Arc::new(inner)))
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Reduction polynomial coefficients, ascending degree, for m > 1.
    pub fn reduction_poly(&self) -> Option<Vec<u32>> {
        if self.0.m == 1 {
            None
        } else {
            Some(self.0.poly.clone())
        }
    }

    pub fn element(&self, value: u32) -> Result<Fe, FieldError> {
        if value < self.0.q {
            Ok(Fe(value as u16))
        } else {
            Err(FieldError::OutOfRange { value, q: self.0.q })
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(|v| Fe(v as u16))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        debug_assert!(a.value() < inner.q && b.value() < inner.q);
        if inner.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if inner.m == 1 {
            return Fe(((a.value() + b.value()) % inner.p) as u16);
        }
        digitwise(inner.p, a, b, |x, y, p| (x + y) % p)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let inner = &*self.0;
        if inner.p == 2 {
            return a;
        }
        if inner.m == 1 {
            return Fe((((inner.p - a.value()) % inner.p) % inner.p) as u16);
        }
        digitwise(inner.p, a, Fe::ZERO, |x, _, p| (p - x) % p)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        debug_assert!(a.value() < inner.q && b.value() < inner.q);
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        if !inner.exp.is_empty() {
            let la = inner.log[a.0 as usize] as usize;
            let lb = inner.log[b.0 as usize] as usize;
            return Fe(inner.exp[la + lb]);
        }
        mul_direct(inner, a, b)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        let inner = &*self.0;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if !inner.exp.is_empty() {
            let la = inner.log[a.0 as usize] as usize;
            return Ok(Fe(inner.exp[inner.q as usize - 1 - la]));
        }
        // a^(q-2) in the multiplicative group of order q-1.
        Ok(self.pow(a, (inner.q - 2) as u64))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Coefficient-wise combination of two elements viewed as base-p digit vectors.
fn digitwise(p: u32, a: Fe, b: Fe, op: impl Fn(u32, u32, u32) -> u32) -> Fe {
    let mut av = a.value();
    let mut bv = b.value();
    let mut out = 0u32;
    let mut scale = 1u32;
    while av > 0 || bv > 0 {
        out += op(av % p, bv % p, p) * scale;
        av /= p;
        bv /= p;
        scale *= p;
    }
    Fe(out as u16)
}

/// Multiplication without tables: schoolbook polynomial product reduced by
/// the field polynomial (or plain modular product for m = 1).
fn mul_direct(inner: &FieldInner, a: Fe, b: Fe) -> Fe {
    if inner.m == 1 {
        return Fe(((a.value() as u64 * b.value() as u64) % inner.p as u64) as u16);
    }
    let p = inner.p as u64;
    let m = inner.m as usize;
    let da = digits(inner.p, a.value(), m);
    let db = digits(inner.p, b.value(), m);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // Reduce modulo the monic field polynomial: z^m = -(lower coefficients).
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..m {
            let pk = inner.poly[k] as u64;
            if pk != 0 {
                let sub = (c * pk) % p;
                prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
            }
        }
    }
    let mut out = 0u32;
    for d in (0..m).rev() {
        out = out * inner.p + prod[d] as u32;
    }
    Fe(out as u16)
}

fn digits(p: u32, mut v: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
        if v == 0 {
            break;
        }
    }
    out
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut m = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                m += 1;
            }
            return if rest == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Polynomials over GF(p) as ascending coefficient vectors with no trailing
/// zeros. Only what the irreducibility search needs.
mod poly_fp {
    pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Remainder of a divided by monic-after-normalization b.
    pub fn rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let b = trim(b.to_vec());
        assert!(!b.is_empty());
        let lead = *b.last().unwrap();
        let lead_inv = mod_inv(p, lead);
        let mut r = trim(a.to_vec());
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = (*r.last().unwrap() * lead_inv) % p;
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (factor * bc) % p) % p;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    fn mod_inv(p: u32, a: u32) -> u32 {
        // p is a small prime; Fermat is plenty.
        let mut acc = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }
}

/// Lexicographically first monic irreducible of degree m over GF(p),
/// ordering candidates by the base-p integer their low coefficients encode.
/// Found by trial division against every monic polynomial of degree
/// 1..=m/2, which is exhaustive at the orders this crate supports.
fn first_irreducible(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    let mut low_count = 1u64;
    for _ in 0..m {
        low_count *= p as u64;
    }
    'cand: for n in 0..low_count {
        let mut f = Vec::with_capacity(m + 1);
        let mut v = n;
        for _ in 0..m {
            f.push((v % p as u64) as u32);
            v /= p as u64;
        }
        f.push(1);
        // Divisor of degree d: monic, so enumerate p^d low-coefficient vectors.
        for d in 1..=m / 2 {
            let mut div_count = 1u64;
            for _ in 0..d {
                div_count *= p as u64;
            }
            for k in 0..div_count {
                let mut g = Vec::with_capacity(d + 1);
                let mut w = k;
                for _ in 0..d {
                    g.push((w % p as u64) as u32);
                    w /= p as u64;
                }
                g.push(1);
                if poly_fp::rem(p, &f, &g).is_empty() {
                    continue 'cand;
                }
            }
        }
        return f;
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Smallest element generating the multiplicative group.
fn find_generator(inner: &FieldInner) -> Fe {
    let order = inner.q - 1;
    let factors = prime_factors(order);
    'outer: for g in 2..inner.q {
        let g = Fe(g as u16);
        for &r in &factors {
            if pow_direct(inner, g, (order / r) as u64) == Fe::ONE {
                continue 'outer;
            }
        }
        return g;
    }
    // GF(2): the group is trivial and 1 generates it.
    Fe::ONE
}

fn pow_direct(inner: &FieldInner, a: Fe, mut e: u64) -> Fe {
    let mut base = a;
    let mut acc = Fe::ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_direct(inner, acc, base);
        }
        base = mul_direct(inner, base, base);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u32) -> Fe {
        Fe(v as u16)
    }

    #[test]
    fn constructs_prime_and_extension_fields() {
        let f2 = Field::new(2).unwrap();
        assert_eq!((f2.characteristic(), f2.degree()), (2, 1));
        let f4 = Field::new(4).unwrap();
        assert_eq!((f4.characteristic(), f4.degree()), (2, 2));
        assert_eq!(f4.reduction_poly().unwrap(), vec![1, 1, 1]); // z^2 + z + 1
        assert_eq!(Field::new(6), Err(FieldError::NotPrimePower(6)));
        assert_eq!(Field::new(1), Err(FieldError::NotPrimePower(1)));
        assert_eq!(Field::new(0), Err(FieldError::NotPrimePower(0)));
        assert_eq!(Field::new(1 << 17), Err(FieldError::Overflow(1 << 17)));
        assert!(Field::new(1 << 16).is_ok());
    }

    #[test]
    fn gf2_addition_is_xor() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.add(fe(1), fe(1)), fe(0));
        // y6 = x3 + x4 with both bits set collapses to zero.
        assert_eq!(f.add(fe(1), fe(1)), Fe::ZERO);
    }

    #[test]
    fn gf5_examples() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.add(fe(3), fe(4)), fe(2));
        // inv(3) found by exhaustive search: 3 * b = 1 (mod 5).
        let want = f.elements().find(|&b| f.mul(fe(3), b) == Fe::ONE).unwrap();
        assert_eq!(f.inv(fe(3)).unwrap(), want);
        assert_eq!(want, fe(2));
    }

    #[test]
    fn gf4_multiplication_against_brute_force_table() {
        // Brute-force polynomial multiplication mod z^2 + z + 1 over GF(2).
        let f = Field::new(4).unwrap();
        let mul_bits = |a: u32, b: u32| -> u32 {
            let mut prod = 0u32;
            for i in 0..2 {
                for j in 0..2 {
                    if a >> i & 1 == 1 && b >> j & 1 == 1 {
                        prod ^= 1 << (i + j);
                    }
                }
            }
            if prod >> 2 & 1 == 1 {
                prod ^= (1 << 2) | 0b11; // z^2 = z + 1
            }
            prod & 0b11
        };
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f.mul(fe(a), fe(b)).value(), mul_bits(a, b), "{a} * {b}");
            }
        }
        assert_eq!(f.mul(fe(2), fe(2)), fe(3));
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.inv(Fe::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn element_range_check() {
        let f = Field::new(4).unwrap();
        assert!(f.element(3).is_ok());
        assert!(matches!(f.element(4), Err(FieldError::OutOfRange { .. })));
    }

    /// Exhaustive field-axiom check for every supported order up to 16.
    #[test]
    fn axioms_exhaustive_small_orders() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            let els: Vec<Fe> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                assert_eq!(f.mul(Fe::ONE, a), a);
                assert_eq!(f.add(Fe::ZERO, a), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(f.inv(a).unwrap(), a), Fe::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert!(f.add(a, b).value() < q);
                    assert!(f.mul(a, b).value() < q);
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity in GF({q})"
                        );
                    }
                }
            }
        }
    }

    /// Randomized axiom spot-checks for larger orders, including ones past
    /// the table bound.
    #[test]
    fn axioms_randomized_large_orders() {
        use rand::{Rng, SeedableRng};
        for q in [25u32, 27, 64, 81, 125, 243, 256, 257, 512, 729, 1024, 65521, 65536] {
            let f = match Field::new(q) {
                Ok(f) => f,
                Err(e) => panic!("GF({q}) should construct: {e}"),
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(q as u64);
            for _ in 0..200 {
                let a = f.element(rng.gen_range(0..q)).unwrap();
                let b = f.element(rng.gen_range(0..q)).unwrap();
                let c = f.element(rng.gen_range(0..q)).unwrap();
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(f.inv(a).unwrap(), a), Fe::ONE);
                }
            }
        }
    }

    #[test]
    fn gf8_reduction_poly_is_z3_z_1() {
        let f = Field::new(8).unwrap();
        assert_eq!(f.reduction_poly().unwrap(), vec![1, 1, 0, 1]);
    }
}
