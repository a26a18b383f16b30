//! Monic integer cubics: discriminants, Sturm root counting, certified real
//! root isolation, and factorization data modulo primes (Dedekind maximality
//! test and splitting types).
//!
//! Root certification works on dyadic rationals `n / 2^k`: the sign of the
//! polynomial at a dyadic point is the sign of the integer
//! `n^3 + a n^2 2^k + b n 2^{2k} + c 2^{3k}`, evaluated exactly. Bisection
//! therefore never trusts floating point; the returned intervals carry an
//! exact sign change and are widened outward by two ulps when rounded to
//! `f64`, so the containment claim survives the conversion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::NumberFieldError;

/// Largest allowed |coefficient|. Keeps discriminants, Sturm chains, and
/// norm matrices inside `i128` with room to spare.
pub const MAX_COEFF: i64 = 100_000;

/// Default width for certified root intervals.
pub const DEFAULT_ROOT_PRECISION: f64 = 1e-13;

/// Smallest accepted interval width; below this the dyadic bisection depth
/// cap would be hit.
const MIN_ROOT_PRECISION: f64 = 1e-14;

/// Monic irreducible cubic `x^3 + a x^2 + b x + c` over the integers.
/// Irreducibility is checked at construction (a monic cubic is reducible
/// over the rationals exactly when it has an integer root dividing `c`), so
/// every value of this type names a genuine cubic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubicPoly {
    a: i64,
    b: i64,
    c: i64,
}

impl CubicPoly {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, NumberFieldError> {
        for v in [a, b, c] {
            if v.abs() > MAX_COEFF {
                return Err(NumberFieldError::CoefficientTooLarge(v, MAX_COEFF));
            }
        }
        // x = 0 is a root iff c = 0; other integer roots divide c.
        if c == 0 {
            return Err(NumberFieldError::Reducible { a, b, c });
        }
        let ca = c.unsigned_abs();
        let mut d = 1u64;
        while d * d <= ca {
            if ca % d == 0 {
                for q in [d, ca / d] {
                    let q = q as i64;
                    for root in [q, -q] {
                        let r = root as i128;
                        if r * r * r + a as i128 * r * r + b as i128 * r + c as i128 == 0 {
                            return Err(NumberFieldError::Reducible { a, b, c });
                        }
                    }
                }
            }
            d += 1;
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn coeffs(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    /// `18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2`; nonzero for an irreducible
    /// cubic, positive exactly when all three roots are real.
    pub fn discriminant(&self) -> i128 {
        discriminant_i128(self.a, self.b, self.c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        ((x + self.a as f64) * x + self.b as f64) * x + self.c as f64
    }

    fn deriv_f64(&self, x: f64) -> f64 {
        (3.0 * x + 2.0 * self.a as f64) * x + self.b as f64
    }

    /// Sturm count of distinct real roots; `3` exactly when the field is
    /// totally real. Reducible input cannot occur: construction rejects it,
    /// so the chain below never degenerates to a shared factor.
    pub fn is_totally_real(&self) -> bool {
        self.real_root_count() == 3
    }

    /// Sign-variation difference of the Sturm chain at -inf and +inf.
    fn real_root_count(&self) -> i32 {
        let (alpha, beta, p3) = self.sturm_tail();
        // Chain signs at -inf / +inf: f (degree 3, monic), f' (degree 2,
        // lead 3), then alpha x + beta, then the constant p3.
        let mut lo = vec![-1i32, 1];
        let mut hi = vec![1i32, 1];
        if alpha != 0 {
            lo.push(-sign_i128(alpha));
            hi.push(sign_i128(alpha));
            lo.push(sign_i128(p3));
            hi.push(sign_i128(p3));
        } else {
            // Constant remainder; beta = 0 would mean a repeated root,
            // impossible for an irreducible cubic.
            debug_assert!(beta != 0);
            lo.push(sign_i128(beta));
            hi.push(sign_i128(beta));
        }
        variations(&lo) - variations(&hi)
    }

    /// Scaled Sturm remainders: `p2 = alpha x + beta` with
    /// `alpha = 2a^2 - 6b`, `beta = ab - 9c`, and the constant
    /// `p3 = -(3 beta^2 - 2 a alpha beta + b alpha^2)`. Positive scalings of
    /// the true remainders, so sign variations are unchanged.
    fn sturm_tail(&self) -> (i128, i128, i128) {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let alpha = 2 * a * a - 6 * b;
        let beta = a * b - 9 * c;
        let p3 = -(3 * beta * beta - 2 * a * alpha * beta + b * alpha * alpha);
        (alpha, beta, p3)
    }

    /// Sign variations of the Sturm chain at the dyadic point `n / 2^k`.
    fn sturm_variations_at(&self, n: i128, k: u32) -> i32 {
        let (alpha, beta, p3) = self.sturm_tail();
        let s0 = self.sign_at_dyadic(n, k);
        let s1 = {
            let (a, b) = (self.a as i128, self.b as i128);
            // 3n^2 + 2a n 2^k + b 4^k; fits i128 for k <= 30, BigInt above.
            if k <= 30 && n.abs() < (1 << 40) {
                sign_i128(3 * n * n + 2 * a * n * (1i128 << k) + b * (1i128 << (2 * k)))
            } else {
                let big = 3 * BigInt::from(n) * n
                    + 2 * BigInt::from(a) * n * (BigInt::from(1) << k)
                    + BigInt::from(b) * (BigInt::from(1) << (2 * k));
                sign_big(&big)
            }
        };
        let s2 = {
            if k <= 60 && n.abs() < (1 << 60) {
                sign_i128(alpha * n + beta * (1i128 << k))
            } else {
                let big = BigInt::from(alpha) * n + BigInt::from(beta) * (BigInt::from(1) << k);
                sign_big(&big)
            }
        };
        let mut signs = vec![s0, s1];
        if alpha != 0 {
            signs.push(s2);
            signs.push(sign_i128(p3));
        } else {
            signs.push(s2);
        }
        variations(&signs)
    }

    /// Exact sign of the polynomial at `n / 2^k`.
    fn sign_at_dyadic(&self, n: i128, k: u32) -> i32 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        // i128 fast path: |n| < 2^35 and k <= 30 keeps every term under
        // 2^110.
        if k <= 30 && n.abs() < (1 << 35) {
            let p = 1i128 << k;
            return sign_i128(n * n * n + a * n * n * p + b * n * p * p + c * p * p * p);
        }
        let n = BigInt::from(n);
        let p: BigInt = BigInt::from(1) << k;
        let v = &n * &n * &n
            + BigInt::from(a) * &n * &n * &p
            + BigInt::from(b) * &n * &p * &p
            + BigInt::from(c) * &p * &p * &p;
        sign_big(&v)
    }

    /// The three real roots as certified intervals, descending. Each
    /// interval has an exact sign change of the polynomial at its dyadic
    /// endpoints and width at most `precision` after outward rounding.
    pub fn real_embeddings(
        &self,
        precision: f64,
    ) -> Result<[RootInterval; 3], NumberFieldError> {
        if !(precision.is_finite() && precision >= MIN_ROOT_PRECISION && precision <= 1.0) {
            return Err(NumberFieldError::BadPrecision(precision));
        }
        if !self.is_totally_real() {
            return Err(NumberFieldError::NotTotallyReal);
        }
        // Cauchy bound: all roots lie strictly inside (-bound, bound).
        let bound = 1 + self.a.abs().max(self.b.abs()).max(self.c.abs()) as i128;

        // Sturm bisection until each interval (lo, hi] holds one root.
        let mut isolated: Vec<(i128, i128, u32)> = Vec::new();
        let mut stack = vec![(-bound, bound, 0u32)];
        while let Some((lo, hi, k)) = stack.pop() {
            let count = self.sturm_variations_at(lo, k) - self.sturm_variations_at(hi, k);
            if count <= 0 {
                continue;
            }
            if count == 1 {
                isolated.push((lo, hi, k));
                continue;
            }
            debug_assert!(k < 100, "isolation depth exceeded");
            let (lo2, hi2, k2) = if (lo + hi) % 2 == 0 {
                (lo, hi, k)
            } else {
                (lo * 2, hi * 2, k + 1)
            };
            let mid = (lo2 + hi2) / 2;
            stack.push((lo2, mid, k2));
            stack.push((mid, hi2, k2));
        }
        debug_assert_eq!(isolated.len(), 3);

        // Refine each isolating interval by exact sign bisection to a dyadic
        // width of precision/4, leaving room for the outward rounding.
        let target = precision / 4.0;
        let mut out: Vec<RootInterval> = Vec::with_capacity(3);
        for (mut lo, mut hi, mut k) in isolated {
            let mut s_lo = self.sign_at_dyadic(lo, k);
            if s_lo == 0 {
                // Dyadic points are never roots of an irreducible cubic.
                unreachable!("rational root of an irreducible cubic");
            }
            debug_assert_eq!(self.sign_at_dyadic(hi, k), -s_lo);
            while (hi - lo) as f64 / (k as f64).exp2() > target {
                if (lo + hi) % 2 != 0 {
                    lo *= 2;
                    hi *= 2;
                    k += 1;
                }
                let mid = (lo + hi) / 2;
                let s_mid = self.sign_at_dyadic(mid, k);
                debug_assert!(s_mid != 0);
                if s_mid == s_lo {
                    lo = mid;
                    s_lo = s_mid;
                } else {
                    hi = mid;
                }
            }
            let scale = (k as f64).exp2();
            let lo_f = next_down(next_down(lo as f64 / scale));
            let hi_f = next_up(next_up(hi as f64 / scale));
            out.push(RootInterval { lo: lo_f, hi: hi_f });
        }
        out.sort_by(|x, y| y.mid().total_cmp(&x.mid()));
        Ok([out[0], out[1], out[2]])
    }

    /// Midpoints of the certified intervals, polished by three Newton steps
    /// (which cannot leave the basin at these widths), descending.
    pub fn root_approx(&self, precision: f64) -> Result<[f64; 3], NumberFieldError> {
        let iv = self.real_embeddings(precision)?;
        let mut roots = [0.0f64; 3];
        for (slot, r) in roots.iter_mut().zip(iv.iter()) {
            let mut x = r.mid();
            for _ in 0..3 {
                let d = self.deriv_f64(x);
                if d != 0.0 {
                    x -= self.eval_f64(x) / d;
                }
            }
            *slot = x;
        }
        Ok(roots)
    }
}

impl fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^3")?;
        for (coeff, power) in [(self.a, "x^2"), (self.b, "x"), (self.c, "")] {
            if coeff == 0 {
                continue;
            }
            let sign = if coeff < 0 { '-' } else { '+' };
            let mag = coeff.unsigned_abs();
            if power.is_empty() {
                write!(f, " {sign} {mag}")?;
            } else if mag == 1 {
                write!(f, " {sign} {power}")?;
            } else {
                write!(f, " {sign} {mag}{power}")?;
            }
        }
        Ok(())
    }
}

/// A certified real root enclosure with exact sign change at the endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootInterval {
    lo: f64,
    hi: f64,
}

impl RootInterval {
    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn sign_i128(v: i128) -> i32 {
    match v.cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn sign_big(v: &BigInt) -> i32 {
    if v.is_negative() {
        -1
    } else if v.is_positive() {
        1
    } else {
        0
    }
}

/// Sign changes in a sequence, zeros skipped.
fn variations(signs: &[i32]) -> i32 {
    let mut count = 0;
    let mut last = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = x.to_bits();
    let next = if x == 0.0 {
        1
    } else if bits >> 63 == 0 {
        bits + 1
    } else {
        bits - 1
    };
    f64::from_bits(next)
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Discriminant formula on raw coefficients, exact in `i128`; lets
/// enumeration filter candidate triples before full construction.
pub(crate) fn discriminant_i128(a: i64, b: i64, c: i64) -> i128 {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c
}

pub(crate) fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for q in [2u64, 3] {
        if p == q {
            return true;
        }
        if p % q == 0 {
            return false;
        }
    }
    let mut d = 5u64;
    while d * d <= p {
        if p % d == 0 || p % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

// Dense F_p[x] arithmetic on ascending coefficient vectors, always reduced
// and trimmed; the zero polynomial is the empty vector. p < 2^31 keeps all
// products inside u64 via u128 intermediates.

type PPoly = Vec<u64>;

fn ptrim(mut v: PPoly) -> PPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pmul(f: &[u64], g: &[u64], p: u64) -> PPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &fi) in f.iter().enumerate() {
        if fi == 0 {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            let cur = out[i + j] as u128 + fi as u128 * gj as u128;
            out[i + j] = (cur % p as u128) as u64;
        }
    }
    ptrim(out)
}

fn ppowmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn pinv(x: u64, p: u64) -> u64 {
    ppowmod(x, p - 2, p)
}

/// Remainder of `num` by `den` (den nonzero).
fn prem(num: &[u64], den: &[u64], p: u64) -> PPoly {
    let mut r: PPoly = ptrim(num.to_vec());
    let d = den.len() - 1;
    let lead_inv = pinv(*den.last().unwrap(), p);
    while r.len() > d {
        let k = r.len() - 1 - d;
        let coef = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
        if coef != 0 {
            for (i, &di) in den.iter().enumerate() {
                let sub = coef as u128 * di as u128 % p as u128;
                let cur = r[k + i] as u128 + p as u128 - sub;
                r[k + i] = (cur % p as u128) as u64;
            }
        }
        r.pop();
        r = ptrim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Monic gcd; gcd(0, g) = monic g.
fn pgcd(f: &[u64], g: &[u64], p: u64) -> PPoly {
    let mut a = ptrim(f.to_vec());
    let mut b = ptrim(g.to_vec());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = pinv(lead, p);
            for v in &mut a {
                *v = (*v as u128 * inv as u128 % p as u128) as u64;
            }
        }
    }
    a
}

fn peval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &coef in f.iter().rev() {
        acc = ((acc as u128 * x as u128 + coef as u128) % p as u128) as u64;
    }
    acc
}

fn reduce_coeff(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// The monic factorization of the cubic modulo a prime: a list of
/// `(irreducible factor, multiplicity)` with factors as ascending
/// coefficient vectors, sorted by degree then coefficients. A cubic or
/// quadratic over F_p with no roots is irreducible, so a root scan plus
/// deflation is a complete factorization.
pub fn factor_cubic_mod_p(
    poly: &CubicPoly,
    p: u64,
) -> Result<Vec<(Vec<u64>, u32)>, NumberFieldError> {
    if !is_prime_u64(p) {
        return Err(NumberFieldError::NotPrime(p));
    }
    let f: PPoly = ptrim(vec![
        reduce_coeff(poly.c(), p),
        reduce_coeff(poly.b(), p),
        reduce_coeff(poly.a(), p),
        1,
    ]);
    let mut g = f;
    let mut factors: Vec<(PPoly, u32)> = Vec::new();
    for r in 0..p {
        let mut mult = 0u32;
        while g.len() > 1 && peval(&g, r, p) == 0 {
            // Synthetic division by (x - r).
            let mut q = vec![0u64; g.len() - 1];
            let mut carry = 0u64;
            for i in (0..g.len() - 1).rev() {
                carry = ((g[i + 1] as u128 + carry as u128 * r as u128) % p as u128) as u64;
                q[i] = carry;
            }
            g = ptrim(q);
            mult += 1;
        }
        if mult > 0 {
            factors.push((vec![(p - r) % p, 1], mult));
        }
        if g.len() <= 1 {
            break;
        }
    }
    if g.len() > 1 {
        factors.push((g, 1));
    }
    factors.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    debug_assert_eq!(
        factors
            .iter()
            .map(|(f, e)| (f.len() - 1) as u32 * e)
            .sum::<u32>(),
        3
    );
    Ok(factors)
}

/// Dedekind's criterion at `p`: with `fbar = prod g_i^{e_i}`, set
/// `g = prod g_i`, `h = prod g_i^{e_i - 1}`, lift both to integers, and form
/// `F = (g h - f)/p`. The order `Z[theta]` is maximal at `p` exactly when
/// `gcd(Fbar, gbar, hbar) = 1` in F_p[x]. Squarefree reduction short
/// circuits to maximal.
pub fn dedekind_maximal_at_p(poly: &CubicPoly, p: u64) -> Result<bool, NumberFieldError> {
    let factors = factor_cubic_mod_p(poly, p)?;
    if factors.iter().all(|(_, e)| *e == 1) {
        return Ok(true);
    }
    let mut gbar: PPoly = vec![1];
    let mut hbar: PPoly = vec![1];
    for (fac, e) in &factors {
        gbar = pmul(&gbar, fac, p);
        for _ in 1..*e {
            hbar = pmul(&hbar, fac, p);
        }
    }
    // Integer lifts with coefficients in [0, p); the product g*h is congruent
    // to f mod p, so the difference divides by p exactly.
    let lift = |v: &PPoly| -> Vec<i128> { v.iter().map(|&x| x as i128).collect() };
    let gl = lift(&gbar);
    let hl = lift(&hbar);
    let mut prod = vec![0i128; gl.len() + hl.len() - 1];
    for (i, &gi) in gl.iter().enumerate() {
        for (j, &hj) in hl.iter().enumerate() {
            prod[i + j] += gi * hj;
        }
    }
    let f_int: [i128; 4] = [
        poly.c() as i128,
        poly.b() as i128,
        poly.a() as i128,
        1,
    ];
    let mut fcap: Vec<u64> = Vec::with_capacity(4);
    for i in 0..4 {
        let diff = prod.get(i).copied().unwrap_or(0) - f_int[i];
        debug_assert_eq!(diff % p as i128, 0);
        fcap.push((diff / p as i128).rem_euclid(p as i128) as u64);
    }
    let fcap = ptrim(fcap);
    let d = pgcd(&pgcd(&fcap, &gbar, p), &hbar, p);
    Ok(d.len() == 1)
}

/// Ramification and residue data above a prime where the order is maximal:
/// `(e, f)` per prime ideal, whether the prime is non-decomposed (a single
/// ideal above it), and its residue degree in that case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingType {
    pub factors: Vec<(u32, u32)>,
    pub non_decomposed: bool,
    pub residue_degree: Option<u32>,
}

/// Splitting data read off the factorization of the polynomial modulo `p`,
/// valid by Dedekind's theorem only where the order is maximal; refuses
/// otherwise rather than guessing.
pub fn splitting_type(poly: &CubicPoly, p: u64) -> Result<SplittingType, NumberFieldError> {
    if !dedekind_maximal_at_p(poly, p)? {
        return Err(NumberFieldError::NotMaximalAt { p });
    }
    let factors = factor_cubic_mod_p(poly, p)?;
    let mut efs: Vec<(u32, u32)> = factors
        .iter()
        .map(|(f, e)| (*e, (f.len() - 1) as u32))
        .collect();
    efs.sort();
    let non_decomposed = efs.len() == 1;
    let residue_degree = if non_decomposed { Some(efs[0].1) } else { None };
    Ok(SplittingType {
        factors: efs,
        non_decomposed,
        residue_degree,
    })
}

/// Splitting types at each prime of a sorted list, as a map; convenience for
/// record construction.
pub(crate) fn splitting_map(
    poly: &CubicPoly,
    primes: &[u64],
) -> Result<BTreeMap<u64, SplittingType>, NumberFieldError> {
    let mut map = BTreeMap::new();
    for &p in primes {
        map.insert(p, splitting_type(poly, p)?);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(a: i64, b: i64, c: i64) -> CubicPoly {
        CubicPoly::new(a, b, c).unwrap()
    }

    /// Exact dyadic decomposition of a finite f64: x = num / 2^k.
    fn f64_to_dyadic(x: f64) -> (i128, u32) {
        let mut num = x;
        let mut k = 0u32;
        while num.fract() != 0.0 {
            num *= 2.0;
            k += 1;
            assert!(k <= 100, "f64 with exponent below the test range");
        }
        (num as i128, k)
    }

    /// Exact sign change of the polynomial across an interval's endpoints.
    fn certified_sign_change(p: &CubicPoly, r: &RootInterval) -> bool {
        let (nl, kl) = f64_to_dyadic(r.lo());
        let (nh, kh) = f64_to_dyadic(r.hi());
        p.sign_at_dyadic(nl, kl) * p.sign_at_dyadic(nh, kh) == -1
    }

    #[test]
    fn construction_rejects_reducible() {
        assert!(matches!(
            CubicPoly::new(0, 0, 0),
            Err(NumberFieldError::Reducible { .. })
        ));
        // x^3 - 8 = (x - 2)(x^2 + 2x + 4).
        assert!(matches!(
            CubicPoly::new(0, 0, -8),
            Err(NumberFieldError::Reducible { .. })
        ));
        // x^3 - x = x(x-1)(x+1) has c = 0.
        assert!(CubicPoly::new(0, -1, 0).is_err());
        assert!(CubicPoly::new(-1, -2, 1).is_ok());
        // x^3 - 2 is irreducible (but not totally real).
        assert!(CubicPoly::new(0, 0, -2).is_ok());
        assert!(matches!(
            CubicPoly::new(0, 0, MAX_COEFF + 1),
            Err(NumberFieldError::CoefficientTooLarge(..))
        ));
    }

    #[test]
    fn discriminant_frozen_values() {
        assert_eq!(poly(-1, -2, 1).discriminant(), 49);
        assert_eq!(poly(0, -3, -1).discriminant(), 81);
        assert_eq!(poly(0, 0, -2).discriminant(), -108);
        assert_eq!(poly(0, -7, -7).discriminant(), 49);
        assert_eq!(poly(-1, -4, -1).discriminant(), 169);
        assert_eq!(poly(-1, -6, 7).discriminant(), 361);
        // Minimal polynomial of 2*theta over the disc-49 field: the
        // discriminant scales by 2^6.
        assert_eq!(poly(-2, -8, 8).discriminant(), 64 * 49);
    }

    #[test]
    fn totally_real_frozen_cases() {
        assert!(poly(-1, -2, 1).is_totally_real());
        assert!(poly(0, -3, -1).is_totally_real());
        assert!(!poly(0, 0, -2).is_totally_real());
        // Sturm chain with alpha = 0: x^3 + 3x + 1 (a = 0, b = 3 makes
        // 2a^2 - 6b negative; pick b = 0 for the degenerate line).
        assert!(!poly(0, 0, 5).is_totally_real());
    }

    #[test]
    fn totally_real_matches_discriminant_sign() {
        // For an irreducible cubic: three real roots iff disc > 0. The
        // Sturm count must agree with the sign test on a full small scan.
        for a in -5..=5i64 {
            for b in -5..=5i64 {
                for c in -5..=5i64 {
                    if let Ok(p) = CubicPoly::new(a, b, c) {
                        assert_eq!(
                            p.is_totally_real(),
                            p.discriminant() > 0,
                            "disagreement at {a} {b} {c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn embeddings_disc49_frozen() {
        let p = poly(-1, -2, 1);
        let iv = p.real_embeddings(1e-12).unwrap();
        let expected = [1.8019377358048383, 0.4450418679126288, -1.2469796037174672];
        for (r, e) in iv.iter().zip(expected) {
            assert!(r.width() <= 1e-12, "width {}", r.width());
            assert!((r.mid() - e).abs() < 1e-10);
            // Back-substitution residual at the midpoint.
            assert!(p.eval_f64(r.mid()).abs() < 1e-10);
            // The enclosure brackets an exact sign change.
            assert!(certified_sign_change(&p, r));
        }
        let roots = p.root_approx(1e-12).unwrap();
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-14);
        }
    }

    #[test]
    fn embeddings_disc81_frozen() {
        let p = poly(0, -3, -1);
        let roots = p.root_approx(1e-12).unwrap();
        let expected = [1.8793852415718169, -0.3472963553338607, -1.532088886237956];
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-10);
        }
    }

    #[test]
    fn embeddings_reject_bad_input() {
        assert!(matches!(
            poly(0, 0, -2).real_embeddings(1e-12),
            Err(NumberFieldError::NotTotallyReal)
        ));
        assert!(matches!(
            poly(-1, -2, 1).real_embeddings(0.0),
            Err(NumberFieldError::BadPrecision(_))
        ));
        assert!(matches!(
            poly(-1, -2, 1).real_embeddings(1e-20),
            Err(NumberFieldError::BadPrecision(_))
        ));
    }

    #[test]
    fn display_formatting() {
        assert_eq!(poly(-1, -2, 1).to_string(), "x^3 - x^2 - 2x + 1");
        assert_eq!(poly(0, -7, -7).to_string(), "x^3 - 7x - 7");
        assert_eq!(poly(0, 0, -2).to_string(), "x^3 - 2");
        assert_eq!(poly(2, 1, 3).to_string(), "x^3 + 2x^2 + x + 3");
    }

    #[test]
    fn factorization_shapes_frozen() {
        // disc-49 polynomial: irreducible mod 2, a ramified cube mod 7,
        // split completely mod 13.
        let p49 = poly(-1, -2, 1);
        let f2 = factor_cubic_mod_p(&p49, 2).unwrap();
        assert_eq!(f2.len(), 1);
        assert_eq!(f2[0].0.len(), 4);
        assert_eq!(f2[0].1, 1);
        let f7 = factor_cubic_mod_p(&p49, 7).unwrap();
        assert_eq!(f7.len(), 1);
        assert_eq!(f7[0].0, vec![2, 1]); // (x - 5) = (x + 2) mod 7
        assert_eq!(f7[0].1, 3);
        let f13 = factor_cubic_mod_p(&p49, 13).unwrap();
        assert_eq!(f13.len(), 3);
        assert!(f13.iter().all(|(f, e)| f.len() == 2 && *e == 1));
        // disc-81 polynomial mod 3: x^3 - 1 = (x - 1)^3.
        let f3 = factor_cubic_mod_p(&poly(0, -3, -1), 3).unwrap();
        assert_eq!(f3, vec![(vec![2, 1], 3)]);
        assert!(matches!(
            factor_cubic_mod_p(&p49, 6),
            Err(NumberFieldError::NotPrime(6))
        ));
    }

    #[test]
    fn dedekind_frozen_cases() {
        let p49 = poly(-1, -2, 1);
        assert!(dedekind_maximal_at_p(&p49, 2).unwrap());
        // 7^2 divides the discriminant, so this case is the nontrivial one:
        // fbar = (x+2)^3 mod 7, F = (x+1)^2, and gcd(F, x+2) = 1.
        assert!(dedekind_maximal_at_p(&p49, 7).unwrap());
        assert!(dedekind_maximal_at_p(&poly(0, -3, -1), 3).unwrap());
        // Presentation by 2*theta: index 8, so not maximal at 2
        // (fbar = x^3, F = x^2 + 4x - 4, gcd picks up the factor x).
        assert!(!dedekind_maximal_at_p(&poly(-2, -8, 8), 2).unwrap());
    }

    #[test]
    fn splitting_frozen_cases() {
        let p49 = poly(-1, -2, 1);
        let s2 = splitting_type(&p49, 2).unwrap();
        assert_eq!(s2.factors, vec![(1, 3)]);
        assert!(s2.non_decomposed);
        assert_eq!(s2.residue_degree, Some(3));
        let s7 = splitting_type(&p49, 7).unwrap();
        assert_eq!(s7.factors, vec![(3, 1)]);
        assert!(s7.non_decomposed);
        assert_eq!(s7.residue_degree, Some(1));
        let s13 = splitting_type(&p49, 13).unwrap();
        assert_eq!(s13.factors, vec![(1, 1), (1, 1), (1, 1)]);
        assert!(!s13.non_decomposed);
        assert_eq!(s13.residue_degree, None);
        // Totally ramified at 3 in the disc-81 field.
        let s3 = splitting_type(&poly(0, -3, -1), 3).unwrap();
        assert_eq!(s3.factors, vec![(3, 1)]);
        assert_eq!(s3.residue_degree, Some(1));
        // Non-maximal presentations refuse.
        assert!(matches!(
            splitting_type(&poly(-2, -8, 8), 2),
            Err(NumberFieldError::NotMaximalAt { p: 2 })
        ));
    }

    proptest! {
        /// Sum of e*f over the factorization always accounts for the full
        /// degree, and the non-decomposed flag matches the factor count.
        #[test]
        fn splitting_degrees_sum_to_three(
            a in -9i64..=9, b in -9i64..=9, c in -9i64..=9,
            pidx in 0usize..5
        ) {
            let p = [2u64, 3, 5, 7, 11][pidx];
            if let Ok(poly) = CubicPoly::new(a, b, c) {
                if let Ok(st) = splitting_type(&poly, p) {
                    let total: u32 = st.factors.iter().map(|(e, f)| e * f).sum();
                    prop_assert_eq!(total, 3);
                    prop_assert_eq!(st.non_decomposed, st.factors.len() == 1);
                }
            }
        }

        /// Certified intervals contain a sign change and meet the width
        /// contract for random totally real cubics.
        #[test]
        fn embeddings_certified(a in -8i64..=8, b in -8i64..=8, c in -8i64..=8) {
            if let Ok(p) = CubicPoly::new(a, b, c) {
                if p.is_totally_real() {
                    let iv = p.real_embeddings(1e-12).unwrap();
                    for r in &iv {
                        prop_assert!(r.width() <= 1e-12);
                        prop_assert!(certified_sign_change(&p, r));
                    }
                    prop_assert!(iv[0].mid() > iv[1].mid() && iv[1].mid() > iv[2].mid());
                }
            }
        }
    }
}
