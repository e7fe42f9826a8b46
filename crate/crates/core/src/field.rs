//! Exact arithmetic in small Galois fields.
//!
//! A [`FieldContext`] represents `F_q` with `q = p^e <= 16` or an extension
//! `F_{q^m}` with `q^m <= 2^16`. Elements are plain `u32` indices in
//! `[0, q)`: the index is the base-`b` expansion of the coefficient vector
//! of the element over the base field of order `b` (low degree first), so
//! addition is digit-wise and `0`/`1` are the additive/multiplicative
//! identities. Multiplication goes through discrete log tables over a
//! primitive element, which keeps extension fields of order up to `2^16`
//! cheap without materializing a full multiplication table.

use std::sync::Arc;

use crate::error::{domain, Result};

/// Arithmetic context for a finite field.
///
/// Immutable after construction; share freely between threads.
#[derive(Clone, Debug)]
pub struct FieldContext {
    p: u32,
    /// Total extension degree over the prime field.
    e: u32,
    /// Field order, `p^e`.
    q: u32,
    /// Base field for the polynomial representation (`None` = prime field).
    base: Option<Arc<FieldContext>>,
    /// Degree over the base field (1 for prime fields).
    deg: u32,
    /// Monic modulus polynomial over the base field, low degree first,
    /// length `deg + 1`. For prime fields this is `x`.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a fixed primitive element g, i in [0, q-1).
    exp: Vec<u32>,
    /// log[a] for a in [1, q); log[0] is unused.
    log: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
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

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

impl FieldContext {
    /// The prime field `F_p`.
    fn prime_field(p: u32) -> Arc<FieldContext> {
        let mut ctx = FieldContext {
            p,
            e: 1,
            q: p,
            base: None,
            deg: 1,
            modulus: vec![0, 1],
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_log_tables();
        Arc::new(ctx)
    }

    /// Builds `F_{p^e}` for a prime `p` with `p^e <= 16`.
    ///
    /// The modulus is the lexicographically least irreducible monic
    /// polynomial of degree `e` over `F_p`, comparing coefficient
    /// sequences ordered low degree to high.
    pub fn make_field(p: u32, e: u32) -> Result<Arc<FieldContext>> {
        if !is_prime(p) {
            return Err(domain(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(domain("extension degree must be positive"));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= 16).ok_or_else(|| {
            domain(format!("field order {p}^{e} exceeds the supported maximum 16"))
        })?;
        let _ = q;
        let prime = Self::prime_field(p);
        if e == 1 {
            return Ok(prime);
        }
        Self::extend_unchecked(&prime, e)
    }

    /// Builds the extension `F_{q^m}` over this field, `q^m <= 2^16`.
    ///
    /// For `m = 1` the field itself is returned.
    pub fn make_extension(self: &Arc<Self>, m: u32) -> Result<Arc<FieldContext>> {
        if m == 0 {
            return Err(domain("extension degree must be positive"));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let order = (self.q as u64).checked_pow(m).filter(|&o| o <= 1 << 16);
        if order.is_none() {
            return Err(domain(format!(
                "extension order {}^{m} exceeds the supported maximum 2^16",
                self.q
            )));
        }
        Self::extend_unchecked(self, m)
    }

    /// [`make_extension`](Self::make_extension) from a borrowed context;
    /// clones the base tables into a fresh handle.
    pub fn extension_of(&self, m: u32) -> Result<Arc<FieldContext>> {
        Arc::new(self.clone()).make_extension(m)
    }

    fn extend_unchecked(base: &Arc<FieldContext>, m: u32) -> Result<Arc<FieldContext>> {
        let modulus = least_irreducible_monic(base, m);
        let q = (base.q as u64).pow(m) as u32;
        let mut ctx = FieldContext {
            p: base.p,
            e: base.e * m,
            q,
            base: Some(base.clone()),
            deg: m,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_log_tables();
        Ok(Arc::new(ctx))
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let group = q - 1;
        let g = self.find_primitive_element();
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..group {
            exp.push(acc);
            log[acc as usize] = i;
            acc = self.mul_raw(acc, g);
        }
        debug_assert_eq!(acc, 1, "primitive element order mismatch");
        self.exp = exp;
        self.log = log;
    }

    fn find_primitive_element(&self) -> u32 {
        let group = self.q - 1;
        if group == 1 {
            return 1;
        }
        let factors = prime_factors(group);
        'outer: for g in 2..self.q {
            for &f in &factors {
                if self.pow_raw(g, (group / f) as u64) == 1 {
                    continue 'outer;
                }
            }
            return g;
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// Multiplication by direct polynomial arithmetic (used while the log
    /// tables are not built yet).
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.base {
            None => ((a as u64 * b as u64) % self.p as u64) as u32,
            Some(base) => {
                let m = self.deg as usize;
                let da = digits(a, base.q, m);
                let db = digits(b, base.q, m);
                let mut prod = vec![0u32; 2 * m - 1];
                for (i, &ca) in da.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    for (j, &cb) in db.iter().enumerate() {
                        if cb == 0 {
                            continue;
                        }
                        prod[i + j] = base.add(prod[i + j], base.mul(ca, cb));
                    }
                }
                // reduce modulo the monic modulus
                for i in (m..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    for j in 0..m {
                        let sub = base.mul(c, self.modulus[j]);
                        prod[i - m + j] = base.sub(prod[i - m + j], sub);
                    }
                }
                from_digits(&prod[..m], base.q)
            }
        }
    }

    fn pow_raw(&self, mut a: u32, mut n: u64) -> u32 {
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            n >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Total extension degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Degree over the base field of the representation.
    pub fn degree_over_base(&self) -> u32 {
        self.deg
    }

    /// Order of the base field of the representation.
    pub fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.q)
    }

    pub fn base(&self) -> Option<&Arc<FieldContext>> {
        self.base.as_ref()
    }

    /// Modulus polynomial over the base field, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        match &self.base {
            None => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Some(base) => {
                let bq = base.q;
                let mut out = 0u32;
                let mut mult = 1u32;
                let (mut x, mut y) = (a, b);
                for _ in 0..self.deg {
                    out += base.add(x % bq, y % bq) * mult;
                    x /= bq;
                    y /= bq;
                    mult *= bq;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        match &self.base {
            None => {
                if a == 0 {
                    0
                } else {
                    self.p - a
                }
            }
            Some(base) => {
                let bq = base.q;
                let mut out = 0u32;
                let mut mult = 1u32;
                let mut x = a;
                for _ in 0..self.deg {
                    out += base.neg(x % bq) * mult;
                    x /= bq;
                    mult *= bq;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let group = (self.q - 1) as u64;
        let idx = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % group;
        self.exp[idx as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "division by zero field element");
        let group = self.q - 1;
        let idx = (group - self.log[a as usize]) % group;
        self.exp[idx as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        debug_assert!(a < self.q);
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let group = (self.q - 1) as u64;
        let idx = (self.log[a as usize] as u64 % group) as u128 * (n % group) as u128 % group as u128;
        self.exp[idx as usize]
    }

    /// Coordinate vector over the base field, low degree first.
    pub fn coordinates(&self, x: u32) -> Vec<u32> {
        debug_assert!(x < self.q);
        digits(x, self.base_order(), self.deg as usize)
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, coords: &[u32]) -> Result<u32> {
        if coords.len() != self.deg as usize {
            return Err(domain(format!(
                "expected {} coordinates, got {}",
                self.deg,
                coords.len()
            )));
        }
        let bq = self.base_order();
        if let Some(&c) = coords.iter().find(|&&c| c >= bq) {
            return Err(domain(format!("coordinate {c} out of range for base order {bq}")));
        }
        Ok(from_digits(coords, bq))
    }

    /// True when both contexts describe the same field with the same
    /// representation.
    pub fn same_field(&self, other: &FieldContext) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        self.q == other.q
            && self.modulus == other.modulus
            && match (&self.base, &other.base) {
                (None, None) => true,
                (Some(a), Some(b)) => a.same_field(b),
                _ => false,
            }
    }
}

fn digits(mut x: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % base);
        x /= base;
    }
    out
}

fn from_digits(digits: &[u32], base: u32) -> u32 {
    let mut out = 0u32;
    for &d in digits.iter().rev() {
        out = out * base + d;
    }
    out
}

/// Lexicographically least irreducible monic polynomial of degree `m`
/// over `base`, comparing coefficient tuples `(c_0, ..., c_{m-1})`.
fn least_irreducible_monic(base: &Arc<FieldContext>, m: u32) -> Vec<u32> {
    let bq = base.q as u64;
    let total = bq.pow(m);
    for idx in 0..total {
        // idx encodes (c_0, ..., c_{m-1}) with c_0 most significant, so
        // ascending idx is ascending tuple-lexicographic order.
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut rest = idx;
        let mut tmp = vec![0u32; m as usize];
        for slot in (0..m as usize).rev() {
            tmp[slot] = (rest % bq) as u32;
            rest /= bq;
        }
        // tmp is (c_{m-1}, ..., c_0) read back to front; reorder low-first.
        for slot in (0..m as usize).rev() {
            coeffs.push(tmp[slot]);
        }
        coeffs.push(1); // monic
        if is_irreducible(base, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over a finite field")
}

/// Trial division against every monic polynomial of lower degree.
fn is_irreducible(base: &FieldContext, poly: &[u32]) -> bool {
    let m = poly.len() - 1;
    for d in 1..m {
        let count = (base.q as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                divisor.push((rest % base.q as u64) as u32);
                rest /= base.q as u64;
            }
            divisor.push(1);
            if poly_remainder_is_zero(base, poly, &divisor) {
                return false;
            }
        }
    }
    true
}

/// True when `divisor` (monic) divides `poly` exactly.
fn poly_remainder_is_zero(base: &FieldContext, poly: &[u32], divisor: &[u32]) -> bool {
    let mut rem: Vec<u32> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for j in 0..dd {
                let t = base.mul(lead, divisor[j]);
                rem[shift + j] = base.sub(rem[shift + j], t);
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}
