//! Finite fields F_{p^m} with p odd.
//!
//! Elements are packed into a `u32` code `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! where `c_i` are the coefficients of the residue modulo the defining polynomial.
//! Prime fields multiply directly; extension fields go through log/exp tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};

/// A field element. Meaningless without the [`Field`] it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Parameters of F_{p^m}. `modulus` is monic, low coefficient first, length m+1.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

const MAX_ORDER: u64 = 1 << 22;

struct Inner {
    spec: FieldSpec,
    q: u32,
    // exp[i] = g^i for 0 <= i < 2(q-1); log[0] unused
    exp: Vec<u32>,
    log: Vec<u32>,
    inv: Vec<u32>,
    primitive: u32,
}

/// Cheap-to-clone handle on field tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m() == 1 {
            write!(f, "F_{}", self.p())
        } else {
            write!(f, "F_{}^{} mod {}", self.p(), self.m(), poly_string(&self.0.spec.modulus))
        }
    }
}

fn poly_string(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        parts.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

// --- polynomials over F_p, low coefficient first, used only at construction ---

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let (mut b, mut r, p64) = (a as u64 % p as u64, 1u64, p as u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p64;
        }
        b = b * b % p64;
        e >>= 1;
    }
    r as u32
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] as u64 * lead_inv % p as u64;
        for i in 0..=dm {
            let k = d - dm + i;
            r[k] = ((r[k] as u64 + (p as u64 - c) * m[i] as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = r.into_iter().map(|v| v as u32).collect();
    trim(&mut r);
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r: Vec<u32> = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

// x^(p^k) mod f
fn frobenius_power(k: u32, f: &[u32], p: u32) -> Vec<u32> {
    let mut cur = poly_rem(&[0, 1], f, p);
    for _ in 0..k {
        // cur <- cur^p
        let mut base = cur.clone();
        let mut acc = vec![1u32];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's test: f of degree m is irreducible iff x^{p^m} = x mod f and
/// gcd(x^{p^{m/r}} - x, f) = 1 for every prime r | m.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let m = (f.len() - 1) as u32;
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    if poly_sub(&frobenius_power(m, &f, p), &poly_rem(&x, &f, p), p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_factors(m as u64) {
        let h = poly_sub(&frobenius_power(m / r as u32, &f, p), &x, p);
        let g = poly_gcd(&h, &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut c = Vec::with_capacity(m as usize + 1);
        let mut k = code;
        for _ in 0..m {
            c.push((k % p as u64) as u32);
            k /= p as u64;
        }
        c.push(1);
        if c[0] != 0 && is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Validate (p, m, modulus); when the modulus is omitted the first irreducible
    /// monic polynomial in coefficient order is used.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<FieldSpec> {
        if p == 2 {
            return Err(CoreError::Field("p must be odd".into()));
        }
        if !is_prime(p) {
            return Err(CoreError::Field(format!("{p} is not prime")));
        }
        if m == 0 || m > 8 {
            return Err(CoreError::Field(format!("extension degree {m} outside 1..=8")));
        }
        if (p as u64).pow(m) > MAX_ORDER {
            return Err(CoreError::Field(format!("field of order {p}^{m} too large for tables")));
        }
        let modulus = match modulus {
            Some(mut c) => {
                for v in c.iter_mut() {
                    *v %= p;
                }
                trim(&mut c);
                if c.len() != m as usize + 1 {
                    return Err(CoreError::Field(format!("modulus must have degree {m}")));
                }
                let li = inv_mod(c[m as usize], p) as u64;
                for v in c.iter_mut() {
                    *v = (*v as u64 * li % p as u64) as u32;
                }
                if !is_irreducible(&c, p) {
                    return Err(CoreError::Field(format!(
                        "modulus {} is reducible over F_{p}",
                        poly_string(&c)
                    )));
                }
                c
            }
            None => default_modulus(p, m),
        };
        Ok(FieldSpec { p, m, modulus })
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

impl Field {
    pub fn make(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        Ok(Field::from_spec(FieldSpec::new(p, m, modulus)?))
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::make(p, 1, None)
    }

    /// Build from an already validated spec.
    pub fn from_spec(spec: FieldSpec) -> Field {
        let p = spec.p;
        let q = spec.order();
        let n = (q - 1) as u64;
        let mulslow = |a: u32, b: u32| -> u32 {
            let pa = decode(a, p, spec.m);
            let pb = decode(b, p, spec.m);
            encode(&poly_mulmod(&pa, &pb, &spec.modulus, p), p)
        };
        let order_of = |a: u32| -> u64 {
            let mut k = 1u64;
            let mut x = a;
            while x != 1 {
                x = mulslow(x, a);
                k += 1;
            }
            k
        };
        let factors = prime_factors(n);
        let pow_slow = |a: u32, mut e: u64| -> u32 {
            let (mut b, mut r) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    r = mulslow(r, b);
                }
                b = mulslow(b, b);
                e >>= 1;
            }
            r
        };
        let primitive = (1..q)
            .find(|&a| a != 0 && factors.iter().all(|&r| pow_slow(a, n / r) != 1))
            .expect("multiplicative group is cyclic");
        debug_assert!(q > 200 || order_of(primitive) == n);
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n as usize {
            exp[i] = x;
            exp[i + n as usize] = x;
            log[x as usize] = i as u32;
            x = mulslow(x, primitive);
        }
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            let l = log[a as usize] as u64;
            inv[a as usize] = exp[((n - l) % n) as usize];
        }
        Field(Arc::new(Inner { spec, q, exp, log, inv, primitive }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }
    #[inline]
    pub fn m(&self) -> u32 {
        self.0.spec.m
    }
    /// Number of elements p^m.
    pub fn order(&self) -> u32 {
        self.0.q
    }
    /// Order of the multiplicative group.
    pub fn unit_group_order(&self) -> u32 {
        self.0.q - 1
    }
    pub fn primitive_element(&self) -> Fe {
        Fe(self.0.primitive)
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.spec.p;
        if self.0.spec.m == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut r, mut pw) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            r += d * pw;
            pw *= p;
            x /= p;
            y /= p;
        }
        Fe(r)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.spec.p;
        if a.0 == 0 {
            return a;
        }
        if self.0.spec.m == 1 {
            return Fe(p - a.0);
        }
        let (mut x, mut r, mut pw) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = x % p;
            r += ((p - d) % p) * pw;
            pw *= p;
            x /= p;
        }
        Fe(r)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.0.spec.m == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.0.spec.p as u64) as u32);
        }
        let i = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fe(self.0.exp[i as usize])
    }

    /// a + b*c
    #[inline]
    pub fn mul_add(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.add(a, self.mul(b, c))
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a.0 != 0, "inverse of zero");
        Fe(self.0.inv[a.0 as usize])
    }

    pub fn checked_inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            None
        } else {
            Some(self.inv(a))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// a^e for any integer e (negative needs a != 0).
    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            assert!(e > 0, "negative power of zero");
            return Fe::ZERO;
        }
        let n = (self.0.q - 1) as i64;
        let l = self.0.log[a.0 as usize] as i64;
        let k = (l * (e.rem_euclid(n))).rem_euclid(n);
        Fe(self.0.exp[k as usize])
    }

    /// Image of an integer under Z -> F_p -> F_{p^m}.
    pub fn from_i64(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.spec.p as i64) as u32)
    }

    /// n/d as a field element; d must be prime to p.
    pub fn from_frac(&self, n: i64, d: i64) -> Result<Fe> {
        let den = self.from_i64(d);
        if den.is_zero() {
            return Err(CoreError::Field(format!("denominator {d} vanishes mod {}", self.p())));
        }
        Ok(self.div(self.from_i64(n), den))
    }

    /// Coefficient vector of length m.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut c = decode(a.0, self.p(), self.m());
        c.resize(self.m() as usize, 0);
        c
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let p = self.p();
        let reduced: Vec<u32> = c.iter().map(|v| v % p).collect();
        let r = poly_rem(&reduced, &self.0.spec.modulus, p);
        Fe(encode(&r, p))
    }

    /// The class of t (a root of the modulus); equals an integer only when m = 1.
    pub fn generator_t(&self) -> Fe {
        self.from_coeffs(&[0, 1])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> u32 {
        assert!(!a.is_zero());
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        n / gcd(n, l)
    }

    /// Element of multiplicative order exactly d.
    pub fn root_of_unity(&self, d: u32) -> Result<Fe> {
        let n = self.0.q - 1;
        if d == 0 || !n.is_multiple_of(d) {
            return Err(CoreError::Field(format!(
                "no element of order {d} in {self}: {d} does not divide {n}"
            )));
        }
        Ok(Fe(self.0.exp[(n / d) as usize]))
    }

    /// Frobenius a -> a^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p() as i64)
    }

    pub fn is_in_prime_field(&self, a: Fe) -> bool {
        a.0 < self.p()
    }

    /// Integer representative in 0..p for prime-field elements.
    pub fn to_prime(&self, a: Fe) -> Option<u32> {
        self.is_in_prime_field(a).then_some(a.0)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |a, b| self.add(a, b))
    }

    /// Display with the symmetric representative for prime fields.
    pub fn show(&self, a: Fe) -> String {
        if self.m() == 1 {
            let p = self.p();
            if a.0 > p / 2 {
                format!("-{}", p - a.0)
            } else {
                a.0.to_string()
            }
        } else {
            let c = decode(a.0, self.p(), self.m());
            poly_string(&c)
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn decode(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(m as usize);
    while a > 0 {
        c.push(a % p);
        a /= p;
    }
    c
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f3() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.unit_group_order(), 2);
        assert_eq!(f.root_of_unity(2).unwrap(), Fe(2));
        assert_eq!(f.root_of_unity(1).unwrap(), Fe(1));
        // 1/2 = 2 in F_3
        assert_eq!(f.from_frac(1, 2).unwrap(), Fe(2));
    }

    #[test]
    fn even_and_composite_rejected() {
        assert!(Field::make(2, 1, None).is_err());
        assert!(Field::make(9, 1, None).is_err());
        assert!(Field::make(3, 2, Some(vec![2, 0, 1])).is_err()); // t^2 - 1
    }

    #[test]
    fn f9_default_is_t2_plus_1() {
        let f = Field::make(3, 2, None).unwrap();
        assert_eq!(f.spec().modulus, vec![1, 0, 1]);
        let t = f.generator_t();
        assert_eq!(f.mul(t, t), f.from_i64(-1));
        let z = f.root_of_unity(4).unwrap();
        assert_eq!(f.mult_order(z), 4);
        let g = f.primitive_element();
        assert_eq!(f.mult_order(g), 8);
        assert_eq!(z, f.pow(g, 2));
    }

    #[test]
    fn root_of_unity_too_small() {
        let f = Field::prime(3).unwrap();
        assert!(f.root_of_unity(4).is_err());
    }

    fn exhaustive_axioms(f: &Field) {
        let els: Vec<Fe> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4)] {
            exhaustive_axioms(&Field::make(p, m, None).unwrap());
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = Field::make(5, 2, None).unwrap();
        for a in f.elements() {
            let fa = f.frobenius(a);
            assert_eq!(fa == a, f.is_in_prime_field(a));
        }
    }

    #[test]
    fn rabin_matches_root_search_for_quadratics() {
        for p in [3u32, 5, 7] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let f = [c0, c1, 1];
                    let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible(&f, p), !has_root);
                }
            }
        }
    }
}
