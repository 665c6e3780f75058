//! Exact integer-polynomial arithmetic: content and primitive part, norms,
//! evaluation, multiplication and exact division, gcd, the Landau–Mignotte
//! factor-coefficient bound, the Eisenstein irreducibility certificate, and
//! high-precision real root isolation (see [`roots`]).

mod roots;
mod text;

pub use roots::{isolate_real_roots, real_roots, refine_in_interval, RootError};
pub(crate) use roots::real_roots_exact_point;
pub use text::ParsePolynomialError;

use crate::numerics::{int_sqrt_floor, Int, NumericContext, Rational, Real};
use dashu_base::{Abs, Gcd};
use dashu_int::UBig;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Dense univariate polynomial over Z, constant term first.
///
/// No trailing zero coefficients are stored; the zero polynomial is the
/// empty coefficient sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Int>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Int) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Int, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Int::ZERO; k + 1];
        coeffs[k] = c;
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Int {
        self.coeffs.get(i).cloned().unwrap_or(Int::ZERO)
    }

    pub fn leading(&self) -> Int {
        self.coeffs.last().cloned().unwrap_or(Int::ZERO)
    }

    /// Greatest common divisor of the coefficients, positive.
    pub fn content(&self) -> Result<Int, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut g = UBig::ZERO;
        for c in &self.coeffs {
            g = gcd_with(g, c);
            if g == UBig::ONE {
                break;
            }
        }
        Ok(Int::from(g))
    }

    /// `self / content(self)`. Keeps the leading sign.
    pub fn primitive_part(&self) -> Result<IntPolynomial, PolyError> {
        let c = self.content()?;
        Ok(IntPolynomial {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        })
    }

    /// Max absolute coefficient (`|p|_∞`); 0 for the zero polynomial.
    pub fn height(&self) -> Int {
        self.coeffs
            .iter()
            .map(|c| c.clone().abs())
            .max()
            .unwrap_or(Int::ZERO)
    }

    /// Sum of squared coefficients (`|p|²`).
    pub fn length_squared(&self) -> Int {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Euclidean length of the coefficient vector (`|p|`).
    pub fn length(&self, ctx: &NumericContext) -> Real {
        crate::numerics::rational_sqrt(&Rational::from(self.length_squared()), ctx.digits)
    }

    /// Horner evaluation at a real point, at the point's precision.
    pub fn evaluate_real(&self, x: &Real) -> Real {
        let mut acc = Real::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Real::from_parts(c.clone(), 0);
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn evaluate_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from(c.clone());
        }
        acc
    }

    pub fn evaluate_int(&self, x: &Int) -> Int {
        let mut acc = Int::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Int::from(i))
                .collect(),
        )
    }

    pub fn negate(&self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Flips the sign so the leading coefficient is positive.
    pub fn with_positive_leading(&self) -> IntPolynomial {
        if self.leading() < Int::ZERO {
            self.negate()
        } else {
            self.clone()
        }
    }

    pub fn multiply(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Int::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    /// Exact division over Z[x]: `Some(r)` with `q·r = self`, else `None`.
    /// Non-divisibility is a value, not a failure.
    pub fn exact_divide(&self, q: &IntPolynomial) -> Option<IntPolynomial> {
        if q.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let dq = q.degree().unwrap();
        let dp = self.degree().unwrap();
        if dp < dq {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Int::ZERO; dp - dq + 1];
        let lead_q = q.leading();
        for k in (0..=dp - dq).rev() {
            let top = rem[k + dq].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = div_rem(&top, &lead_q);
            if !r.is_zero() {
                return None;
            }
            for (j, qc) in q.coeffs.iter().enumerate() {
                rem[k + j] -= &c * qc;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPolynomial::new(quot))
    }
}

fn div_rem(a: &Int, b: &Int) -> (Int, Int) {
    let q = a / b;
    let r = a - &q * b;
    (q, r)
}

/// gcd accumulation tolerating zero operands (gcd(0, c) = |c|).
fn gcd_with(g: UBig, c: &Int) -> UBig {
    let cu = UBig::try_from(c.clone().abs()).unwrap();
    if cu.is_zero() {
        g
    } else if g.is_zero() {
        cu
    } else {
        g.gcd(&cu)
    }
}

/// Primitive gcd over Z[x] via a primitive pseudo-remainder sequence.
/// Result is primitive with positive leading coefficient, scaled by the
/// gcd of the contents.
pub fn poly_gcd(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return q.with_positive_leading();
    }
    if q.is_zero() {
        return p.with_positive_leading();
    }
    let cp = p.content().unwrap();
    let cq = q.content().unwrap();
    let content_gcd = Int::from(
        UBig::try_from(cp).unwrap().gcd(&UBig::try_from(cq).unwrap()),
    );
    let mut a = p.primitive_part().unwrap();
    let mut b = q.primitive_part().unwrap();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b);
        if r.is_zero() {
            break;
        }
        a = b;
        b = r.primitive_part().unwrap();
    }
    IntPolynomial::constant(content_gcd).multiply(&b.with_positive_leading())
}

/// `lc(b)^s · (a mod b)` for some s ≥ 0, computed without rational
/// arithmetic. Only used inside the primitive PRS, where the scalar factor
/// is stripped again immediately.
fn pseudo_remainder(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.leading();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading();
        let shifted = IntPolynomial::monomial(lr, dr - db).multiply(b);
        r = IntPolynomial::constant(lb.clone())
            .multiply(&r)
            .sub(&shifted);
    }
    r
}

/// Landau–Mignotte style bound `⌈2^d · |p|⌉` on the height of any degree-d
/// integer factor of `p`.
pub fn mignotte_factor_bound(p: &IntPolynomial, d: usize) -> Int {
    let scaled = p.length_squared() * Int::from(4).pow(d);
    let root = int_sqrt_floor(&scaled);
    if &root * &root == scaled {
        root
    } else {
        root + Int::ONE
    }
}

/// Eisenstein irreducibility certificate: a prime q with `q ∤ lead(p)`,
/// `q | p_i` for all i < deg, `q² ∤ p_0`, searched among primes up to 10^6
/// dividing the non-leading content. `None` does not imply reducibility.
pub fn eisenstein(p: &IntPolynomial) -> Option<Int> {
    let d = p.degree()?;
    if d == 0 {
        return None;
    }
    let mut g = UBig::ZERO;
    for c in &p.coeffs[..d] {
        g = gcd_with(g, c);
    }
    if g <= UBig::ONE {
        return None;
    }
    let lead = p.leading();
    let constant = p.coeff(0);
    let mut rest = g;
    let try_prime = |q: u64| -> Option<Int> {
        let qi = Int::from(q);
        if (&lead % &qi).is_zero() {
            return None;
        }
        if (&constant % (&qi * &qi)).is_zero() {
            return None;
        }
        Some(qi)
    };
    const SEARCH_BOUND: u64 = 1_000_000;
    let mut f = 2u64;
    while f <= SEARCH_BOUND {
        let fi = UBig::from(f);
        if (&rest % &fi).is_zero() {
            if let Some(q) = try_prime(f) {
                return Some(q);
            }
            while (&rest % &fi).is_zero() {
                rest /= &fi;
            }
        }
        if &fi * &fi > rest {
            break;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    // Leftover cofactor of the non-leading content: certify only if it is a
    // prime we can afford to check (fits the same bound).
    if rest > UBig::ONE && rest <= UBig::from(SEARCH_BOUND) {
        let r: u64 = rest.try_into().unwrap();
        if is_prime_u64(r) {
            return try_prime(r);
        }
    }
    None
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    /// Example 4's raw polynomial, constant term first.
    fn example4_raw() -> IntPolynomial {
        p(&[3, -21, 30, 21, -27, 6, 0, 3, -9, 3])
    }

    fn example4_primitive() -> IntPolynomial {
        p(&[1, -7, 10, 7, -9, 2, 0, 1, -3, 1])
    }

    #[test]
    fn content_and_primitive_part_of_example4() {
        let q = example4_raw();
        assert_eq!(q.content().unwrap(), Int::from(3));
        assert_eq!(q.primitive_part().unwrap(), example4_primitive());
    }

    #[test]
    fn content_of_primitive_is_one() {
        assert_eq!(p(&[1, 0, 1]).content().unwrap(), Int::ONE);
        assert_eq!(p(&[1, 0, 1]).primitive_part().unwrap(), p(&[1, 0, 1]));
    }

    #[test]
    fn content_keeps_leading_sign_in_primitive_part() {
        // -2x: content 2, primitive part -x.
        let q = p(&[0, -2]);
        assert_eq!(q.content().unwrap(), Int::from(2));
        assert_eq!(q.primitive_part().unwrap(), p(&[0, -1]));
    }

    #[test]
    fn content_of_zero_is_an_error() {
        assert_eq!(
            IntPolynomial::zero().content(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn height_and_length() {
        assert_eq!(p(&[-47, -8, 1]).height(), Int::from(47));
        assert_eq!(p(&[-13, 4, -17, 1]).height(), Int::from(17));
        let xn = IntPolynomial::monomial(Int::ONE, 9);
        assert_eq!(xn.height(), Int::ONE);
        assert_eq!(xn.length_squared(), Int::ONE);
        assert_eq!(example4_primitive().length_squared(), Int::from(295));
    }

    #[test]
    fn evaluate_at_zero_gives_constant() {
        let q = p(&[5, 3, 2]);
        assert_eq!(q.evaluate_int(&Int::ZERO), Int::from(5));
        assert_eq!(
            q.evaluate_rational(&Rational::ZERO),
            Rational::from(Int::from(5))
        );
    }

    #[test]
    fn example4_division_yields_p2() {
        let p1 = p(&[1, -3, 1]);
        let p2 = p(&[1, -4, -3, 2, 0, 0, 0, 1]);
        assert_eq!(example4_primitive().exact_divide(&p1), Some(p2.clone()));
        assert_eq!(p1.multiply(&p2), example4_primitive());
    }

    #[test]
    fn division_by_self_and_nondivisible() {
        let q = p(&[1, -3, 1]);
        assert_eq!(q.exact_divide(&q), Some(p(&[1])));
        // (x² + 1) ÷ (x + 1): remainder 2.
        assert_eq!(p(&[1, 0, 1]).exact_divide(&p(&[1, 1])), None);
    }

    #[test]
    fn divide_after_multiply_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let dp = rng.gen_range(0..5);
            let dq = rng.gen_range(0..4);
            let a = IntPolynomial::new(
                (0..=dp).map(|_| Int::from(rng.gen_range(-1000i64..=1000))).collect(),
            );
            let b = IntPolynomial::new(
                (0..=dq).map(|_| Int::from(rng.gen_range(-1000i64..=1000))).collect(),
            );
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let prod = a.multiply(&b);
            assert_eq!(prod.exact_divide(&b), Some(a.clone()));
            assert_eq!(prod.exact_divide(&a), Some(b.clone()));
        }
    }

    #[test]
    fn content_primitive_reconstitution_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let d = rng.gen_range(0..6);
            let q = IntPolynomial::new(
                (0..=d).map(|_| Int::from(rng.gen_range(-50i64..=50))).collect(),
            );
            if q.is_zero() {
                continue;
            }
            let c = q.content().unwrap();
            let pp = q.primitive_part().unwrap();
            assert_eq!(IntPolynomial::constant(c).multiply(&pp), q);
            assert_eq!(pp.content().unwrap(), Int::ONE);
        }
    }

    #[test]
    fn mignotte_example4_degree2() {
        // length² = 295, ⌈4·√295⌉ = 69.
        assert_eq!(
            mignotte_factor_bound(&example4_primitive(), 2),
            Int::from(69)
        );
    }

    #[test]
    fn mignotte_degree0_and_monotone() {
        let q = example4_primitive();
        assert!(mignotte_factor_bound(&q, 0) >= Int::ONE);
        let mut last = Int::ZERO;
        for d in 0..=q.degree().unwrap() {
            let b = mignotte_factor_bound(&q, d);
            assert!(b >= last);
            last = b;
        }
    }

    #[test]
    fn mignotte_bounds_actual_factors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let dg = rng.gen_range(1..4);
            let dh = rng.gen_range(1..4);
            let g = IntPolynomial::new(
                (0..=dg).map(|_| Int::from(rng.gen_range(-20i64..=20))).collect(),
            );
            let h = IntPolynomial::new(
                (0..=dh).map(|_| Int::from(rng.gen_range(-20i64..=20))).collect(),
            );
            if g.is_zero() || h.is_zero() {
                continue;
            }
            let prod = g.multiply(&h);
            let dg_actual = match g.degree() {
                Some(d) if d >= 1 => d,
                _ => continue,
            };
            assert!(g.height() <= mignotte_factor_bound(&prod, dg_actual));
        }
    }

    #[test]
    fn eisenstein_certificates() {
        // Textbook instance at q = 2.
        assert_eq!(eisenstein(&p(&[2, 2, 1])), Some(Int::from(2)));
        // Example 4's p₂: constant term 1, criterion does not apply.
        assert_eq!(eisenstein(&p(&[1, -4, -3, 2, 0, 0, 0, 1])), None);
        // Reducible anyway.
        assert_eq!(eisenstein(&p(&[-1, 0, 1])), None);
        // x³ + 10x + 5: Eisenstein at 5.
        assert_eq!(eisenstein(&p(&[5, 10, 0, 1])), Some(Int::from(5)));
        // q² divides the constant term: no certificate at 3 (9 | 9).
        assert_eq!(eisenstein(&p(&[9, 3, 1])), None);
    }

    #[test]
    fn eisenstein_conditions_verify_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let d = rng.gen_range(1..6);
            let q = IntPolynomial::new(
                (0..=d).map(|_| Int::from(rng.gen_range(-60i64..=60))).collect(),
            );
            let Some(deg) = q.degree() else { continue };
            if deg == 0 {
                continue;
            }
            if let Some(prime) = eisenstein(&q) {
                assert!(!(&q.leading() % &prime).is_zero());
                for i in 0..deg {
                    assert!((&q.coeff(i) % &prime).is_zero());
                }
                assert!(!(&q.coeff(0) % (&prime * &prime)).is_zero());
            }
        }
    }

    #[test]
    fn poly_gcd_basics() {
        let a = p(&[-1, 0, 1]); // (x-1)(x+1)
        let b = p(&[1, -2, 1]); // (x-1)²
        assert_eq!(poly_gcd(&a, &b), p(&[-1, 1]));
        let c = p(&[2, 2]); // 2(x+1)
        let d = p(&[4, 0, 4]); // 4(x²+1)
        assert_eq!(poly_gcd(&c, &d), p(&[2]));
        assert_eq!(poly_gcd(&a, &IntPolynomial::zero()), a);
    }
}
