//! Minimal polynomial reconstruction from a decimal approximation.
//!
//! The error-control thresholds here decide when an integer relation found
//! for the power vector (1, α̃, α̃², …, α̃ⁿ) is *provably* the minimal
//! polynomial of the unknown algebraic number α: if the degree is at most n,
//! the height at most N, and |α − α̃| < ε(n, N) = 1/(n²(n+1)^(n−1/2)N^(2n)),
//! then the primitive part of the relation polynomial is the minimal
//! polynomial. The verification inequality compares |G(α̃)| — computed
//! exactly over the rationals — against a root separation bound, so a `true`
//! verdict is a certificate, not a heuristic.

use crate::numerics::{
    self, int_sqrt_floor, real_to_rational, resolution, Int, NumericContext, Rational, Real,
    RealDown,
};
use crate::polyarith::IntPolynomial;
use crate::pslq::{
    self, iteration_bound, NoRelationCertificate, PslqFailure, PslqParams, RelationResult,
};
use dashu_base::Abs;
use dashu_int::UBig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no integer relation found for the power vector")]
    NoRelationFound {
        certificate: Option<NoRelationCertificate>,
    },
    #[error("working precision exhausted before a relation could be confirmed")]
    PrecisionExhausted {
        certificate: Option<NoRelationCertificate>,
    },
    #[error("the reconstructed quadratic has complex roots (discriminant {discriminant})")]
    ComplexRoot { discriminant: Int },
}

impl From<PslqFailure> for ReconstructError {
    fn from(f: PslqFailure) -> Self {
        match f {
            PslqFailure::InvalidInput(m) => ReconstructError::InvalidInput(m),
            PslqFailure::IterationLimit(c) => ReconstructError::NoRelationFound {
                certificate: Some(c),
            },
            PslqFailure::PrecisionExhausted(c) => ReconstructError::PrecisionExhausted {
                certificate: Some(c),
            },
        }
    }
}

/// The ⟨α̃, n, N⟩ representation of an algebraic number: a decimal
/// approximation plus degree and height bounds for its minimal polynomial.
#[derive(Debug, Clone)]
pub struct AlgebraicTriple {
    pub approx: Real,
    pub degree: u32,
    pub height_bound: Int,
}

impl AlgebraicTriple {
    pub fn new(approx: Real, degree: u32, height_bound: Int) -> Result<Self, ReconstructError> {
        if degree < 1 {
            return Err(ReconstructError::InvalidInput("degree must be ≥ 1".into()));
        }
        if height_bound < Int::ONE {
            return Err(ReconstructError::InvalidInput(
                "height bound must be ≥ 1".into(),
            ));
        }
        Ok(AlgebraicTriple {
            approx,
            degree,
            height_bound,
        })
    }
}

/// A positive bound of the shape 1/(d·√s): every ε(n, N) threshold and the
/// detection first term have this form. The square part of s is folded into
/// d, so `s == 1` exactly when the bound is rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvSqrtBound {
    d: Int,
    s: Int,
}

impl InvSqrtBound {
    fn new(mut d: Int, mut s: Int) -> Self {
        assert!(d > Int::ZERO && s > Int::ZERO);
        let mut f = Int::from(2);
        while &f * &f <= s {
            let fsq = &f * &f;
            while (&s % &fsq).is_zero() {
                s /= &fsq;
                d *= &f;
            }
            f += Int::ONE;
        }
        InvSqrtBound { d, s }
    }

    /// The exact rational value, when the bound is rational (s = 1).
    pub fn as_rational(&self) -> Option<Rational> {
        (self.s == Int::ONE)
            .then(|| Rational::from_parts(Int::ONE, UBig::try_from(self.d.clone()).unwrap()))
    }

    /// Rational upper bound (≥ the true value), `places` digits tight.
    pub fn upper_rational(&self, places: u32) -> Rational {
        Rational::ONE / (Rational::from(self.d.clone()) * numerics::sqrt_lower(&self.s, places))
    }

    /// Rational lower bound (≤ the true value).
    pub fn lower_rational(&self, places: u32) -> Rational {
        Rational::ONE / (Rational::from(self.d.clone()) * numerics::sqrt_upper(&self.s, places))
    }

    /// The value rounded toward zero at the context precision, so the
    /// guarantee |α − α̃| < ε is never weakened by rounding.
    pub fn to_real_floor(&self, ctx: &NumericContext) -> Real {
        let lo = self.lower_rational(2 * ctx.digits + 8);
        let down: RealDown = lo.to_float::<dashu_float::round::mode::Down, 10>(ctx.digits as usize)
            .value();
        down.with_rounding()
    }

    /// `10^(2k) ≥ d²·s` for the smallest positive k: the number of correct
    /// decimal digits of α̃ that guarantees |α − α̃| ≤ 10^-k < bound… i.e.
    /// ceil(−log10(value)).
    pub fn ceil_neg_log10(&self) -> u32 {
        let target = &self.d * &self.d * &self.s;
        let mut k = 1u32;
        let mut p = Int::from(100); // 10^(2k)
        let hundred = Int::from(100);
        while p < target {
            k += 1;
            p *= &hundred;
        }
        k
    }
}

/// ε(n, N) = 1/(n²·(n+1)^(n−1/2)·N^(2n)): the reconstruction threshold for
/// an algebraic number of degree n and height at most N.
pub fn epsilon_bound_general(n: u32, height: &Int) -> InvSqrtBound {
    assert!(n >= 1 && height >= &Int::ONE);
    let np1 = Int::from(n + 1);
    let d = Int::from(n) * Int::from(n) * np1.pow(n as usize - 1) * height.pow(2 * n as usize);
    InvSqrtBound::new(d, Int::from(n + 1))
}

/// ε(N) = 1/(12√3·N⁴): the quadratic special case.
pub fn epsilon_bound_quadratic(height: &Int) -> InvSqrtBound {
    assert!(height >= &Int::ONE);
    InvSqrtBound::new(Int::from(12) * height.pow(4), Int::from(3))
}

/// General threshold as a Real, rounded toward zero.
pub fn epsilon_general(n: u32, height: &Int, ctx: &NumericContext) -> Real {
    epsilon_bound_general(n, height).to_real_floor(ctx)
}

/// Quadratic threshold as a Real, rounded toward zero.
pub fn epsilon_quadratic(height: &Int, ctx: &NumericContext) -> Real {
    epsilon_bound_quadratic(height).to_real_floor(ctx)
}

/// Correct decimal digits of α̃ that guarantee exact reconstruction:
/// ceil(−log10(ε(n, N))).
pub fn required_digits(n: u32, height: &Int) -> u32 {
    epsilon_bound_general(n, height).ceil_neg_log10()
}

/// (1, α̃, α̃², …, α̃ⁿ), each power computed at the context precision.
pub fn power_vector(approx: &Real, n: u32, ctx: &NumericContext) -> Vec<Real> {
    let a = ctx.lift(approx);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(ctx.real_from_u64(1));
    let mut acc = ctx.real_from_u64(1);
    for _ in 0..n {
        acc = acc * &a;
        out.push(acc.clone());
    }
    out
}

/// Lemma bound on evaluation drift: |f(α) − f(α̃)| ≤ ε·deg(f)·|f|∞.
pub fn eval_error_bound(f: &IntPolynomial, epsilon: &Real) -> Real {
    match f.degree() {
        None | Some(0) => Real::ZERO,
        Some(d) => epsilon * Real::from_parts(Int::from(d) * f.height(), 0),
    }
}

/// Root separation bound: if α is a root of an irreducible degree-n
/// polynomial of height ≤ h and g (degree m, height ≤ g_h) has g(α) ≠ 0,
/// then |g(α)| ≥ n⁻¹·(n+1)^(−m/2)·(m+1)^((1−n)/2)·h^(−m)·g_h^(1−n).
pub fn root_lower_bound(
    n: u32,
    m: u32,
    h_height: &Int,
    g_height: &Int,
    ctx: &NumericContext,
) -> Real {
    root_lower_inv_sqrt(n, m, h_height, g_height).to_real_floor(ctx)
}

fn root_lower_inv_sqrt(n: u32, m: u32, h_height: &Int, g_height: &Int) -> InvSqrtBound {
    // 1/(n·h^m·g^(n−1)·sqrt((n+1)^m·(m+1)^(n−1))), splitting even powers out
    // of the radical.
    let np1 = Int::from(n + 1);
    let mp1 = Int::from(m + 1);
    let mut d = Int::from(n) * h_height.pow(m as usize) * g_height.pow(n as usize - 1);
    d *= np1.pow((m / 2) as usize);
    d *= mp1.pow(((n - 1) / 2) as usize);
    let mut s = Int::ONE;
    if m % 2 == 1 {
        s *= &np1;
    }
    if (n - 1) % 2 == 1 {
        s *= &mp1;
    }
    InvSqrtBound::new(d, s)
}

/// The certification test: true iff |G(α̃)| (exact) is strictly below the
/// separation bound minus the evaluation drift, which certifies G(α) = 0 and
/// hence that the primitive part of G is the minimal polynomial whenever
/// deg α = deg G. Sound for any α of degree ≤ n and height ≤ N within
/// `epsilon` of α̃.
pub fn verify_candidate(
    g: &IntPolynomial,
    approx: &Real,
    n: u32,
    height_bound: &Int,
    epsilon: &Real,
    ctx: &NumericContext,
) -> bool {
    let Some(m) = g.degree() else { return false };
    if m == 0 || m as u32 > n {
        return false;
    }
    let alpha = real_to_rational(approx);
    let lhs = g.evaluate_rational(&alpha).abs();
    let g_height = g.height();
    let places = 2 * ctx.digits + 10;
    let bound_low =
        root_lower_inv_sqrt(n, m as u32, height_bound, &g_height).lower_rational(places);
    let drift = Rational::from(Int::from(m) * &g_height) * real_to_rational(epsilon);
    lhs < bound_low - drift
}

/// Everything reconstruct produces: the polynomial, the thresholds it was
/// checked against, and the relation diagnostics.
#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    /// Primitive, positive leading coefficient; trailing zero relation
    /// coefficients stripped (the true degree may be below the bound).
    pub polynomial: IntPolynomial,
    pub epsilon_used: Real,
    /// |G(α̃)|, exact value rounded to the working precision.
    pub residual: Real,
    pub verified: bool,
    pub pslq: RelationResult,
}

/// Reconstruct the minimal polynomial of the algebraic number described by
/// the triple. The polynomial is returned even when verification fails
/// (`verified = false`); callers wanting a certificate should supply more
/// digits.
pub fn reconstruct_minpoly(
    triple: &AlgebraicTriple,
    ctx: &NumericContext,
) -> Result<ReconstructionReport, ReconstructError> {
    reconstruct_with_params(triple, ctx, PslqParams::default())
}

pub fn reconstruct_with_params(
    triple: &AlgebraicTriple,
    ctx: &NumericContext,
    params: PslqParams,
) -> Result<ReconstructionReport, ReconstructError> {
    let n = triple.degree;
    let height = &triple.height_bound;
    if n < 1 || height < &Int::ONE {
        return Err(ReconstructError::InvalidInput(
            "degree and height bound must be ≥ 1".into(),
        ));
    }
    let v = power_vector(&triple.approx, n, ctx);

    // Detection threshold: the Theorem first term at worst-case height N,
    // made scale invariant, together with the residual level the true
    // minimal polynomial can actually reach given the input's resolution.
    let first_term = detection_first_term(n, height).to_real_floor(ctx);
    let norm = vector_norm(&v, ctx);
    let eps_formula_floor = epsilon_bound_general(n, height).to_real_floor(ctx);
    let res = resolution(&triple.approx);
    let res = if res < eps_formula_floor { res } else { eps_formula_floor.clone() };
    let by_resolution =
        Real::from_parts(Int::from(n) * Int::from(n) * height.clone(), 0) * &res;
    let scaled_first = first_term / &norm;
    let eps_arg = if by_resolution > scaled_first {
        by_resolution
    } else {
        scaled_first
    };

    // Iteration budget from the termination theorem with M = √(n+1)·N.
    let m_bound = numerics::rational_sqrt(&Rational::from(Int::from(n + 1)), ctx.digits)
        * Real::from_parts(height.clone(), 0);
    let max_iter = iteration_bound(n as usize + 1, &m_bound, &params);

    let relation = pslq::find_relation(&v, &eps_arg, ctx, Some(max_iter), params)?;

    let mut raw = IntPolynomial::new(relation.relation.clone());
    // A nonzero α̃ is never a root of x^k: drop any monomial factor the
    // relation carried along (all low coefficients zero).
    if triple.approx != Real::ZERO {
        let k = raw.coeffs().iter().take_while(|c| c.is_zero()).count();
        if k > 0 && k < raw.coeffs().len() {
            raw = IntPolynomial::new(raw.coeffs()[k..].to_vec());
        }
    }
    if raw.degree().is_none() || raw.degree() == Some(0) {
        return Err(ReconstructError::NoRelationFound { certificate: None });
    }
    let polynomial = raw
        .primitive_part()
        .expect("nonzero")
        .with_positive_leading();
    let true_degree = polynomial.degree().unwrap() as u32;

    // Verification epsilon: the formula threshold, tightened to the
    // resolution the approximation actually carries.
    let res_actual = resolution(&triple.approx);
    let epsilon_used = if res_actual < eps_formula_floor {
        res_actual
    } else {
        eps_formula_floor
    };

    let alpha = real_to_rational(&triple.approx);
    let residual_exact = polynomial.evaluate_rational(&alpha).abs();
    let residual = ctx.real_from_rational(&residual_exact).abs();
    let verified = verify_candidate(
        &polynomial,
        &triple.approx,
        true_degree,
        height,
        &epsilon_used,
        ctx,
    );

    Ok(ReconstructionReport {
        polynomial,
        epsilon_used,
        residual,
        verified,
        pslq: relation,
    })
}

/// First term of the verification right side at worst-case height:
/// 1/(n·(n+1)^(n−1/2)·N^(2n−1)); equals n·ε(n,N)·N.
fn detection_first_term(n: u32, height: &Int) -> InvSqrtBound {
    let np1 = Int::from(n + 1);
    let d = Int::from(n) * np1.pow(n as usize - 1) * height.pow(2 * n as usize - 1);
    InvSqrtBound::new(d, np1)
}

fn vector_norm(v: &[Real], ctx: &NumericContext) -> Real {
    let sum = v.iter().fold(Real::ZERO, |acc, x| acc + x * x);
    dashu_base::SquareRoot::sqrt(&ctx.lift(&sum))
}

/// Exact closed form (p + q·√d)/r with gcd(p, q, r) = 1, r > 0 and d
/// squarefree; d = 0 encodes the rational value p/r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticClosedForm {
    pub p: Int,
    pub q: Int,
    pub d: Int,
    pub r: Int,
}

impl QuadraticClosedForm {
    fn normalized(mut p: Int, mut q: Int, d: Int, mut r: Int) -> Self {
        assert!(!r.is_zero());
        if d.is_zero() || q.is_zero() {
            q = Int::ZERO;
        }
        if r < Int::ZERO {
            p = -p;
            q = -q;
            r = -r;
        }
        let gcd3 = gcd_int(&gcd_int(&p, &q), &r);
        if gcd3 > Int::ONE {
            p /= &gcd3;
            q /= &gcd3;
            r /= &gcd3;
        }
        let d = if q.is_zero() { Int::ZERO } else { d };
        QuadraticClosedForm { p, q, d, r }
    }

    pub fn rational(p: Int, r: Int) -> Self {
        Self::normalized(p, Int::ZERO, Int::ZERO, r)
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_zero()
    }

    pub fn evaluate(&self, ctx: &NumericContext) -> Real {
        let num = if self.q.is_zero() {
            ctx.real_from_int(&self.p)
        } else {
            let root = numerics::rational_sqrt(&Rational::from(self.d.clone()), ctx.digits);
            ctx.real_from_int(&self.p) + ctx.real_from_int(&self.q) * root
        };
        num / ctx.real_from_int(&self.r)
    }
}

impl std::fmt::Display for QuadraticClosedForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            if self.r == Int::ONE {
                return write!(f, "{}", self.p);
            }
            return write!(f, "{}/{}", self.p, self.r);
        }
        let mut num = String::new();
        if !self.p.is_zero() {
            num.push_str(&self.p.to_string());
            num.push(if self.q > Int::ZERO { '+' } else { '-' });
        } else if self.q < Int::ZERO {
            num.push('-');
        }
        let qa = self.q.clone().abs();
        if qa != Int::ONE {
            num.push_str(&qa.to_string());
            num.push('*');
        }
        num.push_str(&format!("sqrt({})", self.d));
        if self.r == Int::ONE {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

fn gcd_int(a: &Int, b: &Int) -> Int {
    let ua = UBig::try_from(a.clone().abs()).unwrap();
    let ub = UBig::try_from(b.clone().abs()).unwrap();
    if ua.is_zero() {
        return Int::from(ub);
    }
    if ub.is_zero() {
        return Int::from(ua);
    }
    Int::from(dashu_base::Gcd::gcd(&ua, &ub))
}

/// Split a non-negative integer into `(t, s)` with `v = t²·s` and s
/// squarefree (up to factors beyond the trial-division bound).
pub fn extract_square_part(v: &Int) -> (Int, Int) {
    assert!(v >= &Int::ZERO);
    if v.is_zero() {
        return (Int::ONE, Int::ZERO);
    }
    let mut t = Int::ONE;
    let mut rest = v.clone();
    let mut f = Int::from(2);
    let bound = Int::from(1_000_000);
    while &f * &f <= rest && f <= bound {
        let fsq = &f * &f;
        while (&rest % &fsq).is_zero() {
            rest /= &fsq;
            t *= &f;
        }
        f += Int::ONE;
    }
    // leftover could itself be a perfect square
    let root = int_sqrt_floor(&rest);
    if &root * &root == rest {
        t *= &root;
        rest = Int::ONE;
    }
    (t, rest)
}

/// Reconstruction plus the exact root: the minimal polynomial of a quadratic
/// (or rational) α together with its closed form, selecting the root nearest
/// the approximation.
#[derive(Debug, Clone)]
pub struct QuadraticRecovery {
    pub report: ReconstructionReport,
    pub closed_form: QuadraticClosedForm,
}

pub fn recover_quadratic(
    approx: &Real,
    height_bound: &Int,
    ctx: &NumericContext,
) -> Result<QuadraticRecovery, ReconstructError> {
    let triple = AlgebraicTriple::new(approx.clone(), 2, height_bound.clone())?;
    let report = reconstruct_minpoly(&triple, ctx)?;
    let g = &report.polynomial;
    let closed_form = match g.degree() {
        Some(1) => {
            // a·x + b = 0 → x = −b/a
            QuadraticClosedForm::rational(-g.coeff(0), g.coeff(1))
        }
        Some(2) => {
            let a = g.coeff(2);
            let b = g.coeff(1);
            let c = g.coeff(0);
            let disc = &b * &b - Int::from(4) * &a * &c;
            if disc < Int::ZERO {
                return Err(ReconstructError::ComplexRoot { discriminant: disc });
            }
            let (t, sf) = extract_square_part(&disc);
            let two_a = Int::from(2) * &a;
            if sf <= Int::ONE {
                // rational roots (reducible quadratic; defensive)
                let r1 = QuadraticClosedForm::rational(-&b + &t, two_a.clone());
                let r2 = QuadraticClosedForm::rational(-&b - &t, two_a);
                nearest(r1, r2, approx, ctx)
            } else {
                let r1 = QuadraticClosedForm::normalized(-&b, t.clone(), sf.clone(), two_a.clone());
                let r2 = QuadraticClosedForm::normalized(-&b, -&t, sf, two_a);
                nearest(r1, r2, approx, ctx)
            }
        }
        _ => {
            return Err(ReconstructError::InvalidInput(
                "relation polynomial has no usable degree".into(),
            ))
        }
    };
    Ok(QuadraticRecovery {
        report,
        closed_form,
    })
}

fn nearest(
    a: QuadraticClosedForm,
    b: QuadraticClosedForm,
    approx: &Real,
    ctx: &NumericContext,
) -> QuadraticClosedForm {
    let da = (a.evaluate(ctx) - ctx.lift(approx)).abs();
    let db = (b.evaluate(ctx) - ctx.lift(approx)).abs();
    if da <= db {
        a
    } else {
        b
    }
}
