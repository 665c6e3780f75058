//! Univariate integer polynomial factorization through approximate roots:
//! squarefree reduction, exact real-root isolation, minimal-polynomial
//! reconstruction per root with Mignotte-bounded heights, exact division,
//! and recursion on the quotient. Factors are only ever accepted after an
//! exact divisibility check, so the product identity
//! `content · ∏ factorᵏ = input` holds with no tolerance.

use crate::minpoly::{required_digits, AlgebraicTriple, ReconstructError};
use crate::numerics::{real_to_rational, resolution, Int, NumericContext, Rational, Real};
use crate::polyarith::{
    eisenstein, isolate_real_roots, mignotte_factor_bound, poly_gcd, refine_in_interval,
    IntPolynomial, RootError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("root refinement failed: {0}")]
    Refinement(#[from] RootError),
}

/// How a factor's irreducibility is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertTag {
    /// Degree 1, a verified minimal polynomial, or an Eisenstein prime.
    Exact,
    /// Emitted remainder that no scan could split; may still be irreducible.
    Heuristic,
}

/// A factorization request.
#[derive(Debug, Clone)]
pub struct FactorJob {
    pub input: IntPolynomial,
    /// Highest factor degree scanned per root; default ⌊deg(input)/2⌋.
    pub max_scan_degree: Option<usize>,
    /// Replaces the per-degree Mignotte bound (reproduces cheaper runs at
    /// the caller's risk).
    pub height_override: Option<Int>,
    pub ctx: NumericContext,
}

impl FactorJob {
    pub fn new(input: IntPolynomial, ctx: NumericContext) -> Self {
        FactorJob {
            input,
            max_scan_degree: None,
            height_override: None,
            ctx,
        }
    }
}

/// `content · ∏ factors[i]^multiplicity[i] = input`, exactly. Factors are
/// primitive with positive leading coefficient, sorted by degree then
/// lexicographically by coefficients.
#[derive(Debug, Clone)]
pub struct FactorList {
    pub content: Int,
    pub factors: Vec<(IntPolynomial, u32, CertTag)>,
    /// True when a root had to be abandoned for precision reasons; the
    /// product identity still holds, with the unfactored remainder included.
    pub partial: bool,
}

impl FactorList {
    /// Exact reconstitution of the input (the defining invariant).
    pub fn reconstitute(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(self.content.clone());
        for (f, mult, _) in &self.factors {
            for _ in 0..*mult {
                acc = acc.multiply(f);
            }
        }
        acc
    }
}

/// Squarefree decomposition: signed content and pairwise-coprime squarefree
/// parts with multiplicities, `content · ∏ parts[i]^mult[i] = input`.
#[derive(Debug, Clone)]
pub struct SquarefreeDecomposition {
    pub content: Int,
    pub parts: Vec<(IntPolynomial, u32)>,
}

impl SquarefreeDecomposition {
    /// Product of the distinct squarefree parts (each once).
    pub fn squarefree_part(&self) -> IntPolynomial {
        self.parts
            .iter()
            .fold(IntPolynomial::constant(Int::ONE), |acc, (p, _)| {
                acc.multiply(p)
            })
    }
}

/// `p / gcd(p, p')` made primitive, plus the multiplicity bookkeeping needed
/// to reconstitute `p` exactly.
pub fn squarefree_part(
    p: &IntPolynomial,
) -> Result<(IntPolynomial, SquarefreeDecomposition), FactorError> {
    let decomp = squarefree_decompose(p)?;
    Ok((decomp.squarefree_part(), decomp))
}

pub fn squarefree_decompose(p: &IntPolynomial) -> Result<SquarefreeDecomposition, FactorError> {
    if p.is_zero() {
        return Err(FactorError::InvalidInput(
            "cannot decompose the zero polynomial".into(),
        ));
    }
    let mut content = p.content().expect("nonzero");
    if p.leading() < Int::ZERO {
        content = -content;
    }
    let pp = p.primitive_part().expect("nonzero").with_positive_leading();
    if pp.degree() == Some(0) {
        return Ok(SquarefreeDecomposition {
            content,
            parts: Vec::new(),
        });
    }
    // Musser's algorithm: peel factors of equal multiplicity.
    let mut parts = Vec::new();
    let mut t = poly_gcd(&pp, &pp.derivative());
    let mut v = pp.exact_divide(&t).expect("gcd divides");
    let mut k = 1u32;
    while v.degree().map_or(false, |d| d >= 1) {
        let w = poly_gcd(&t, &v);
        let piece = v.exact_divide(&w).expect("gcd divides");
        if piece.degree().map_or(false, |d| d >= 1) {
            parts.push((piece.with_positive_leading(), k));
        }
        v = w;
        if let Some(q) = t.exact_divide(&v) {
            t = q;
        }
        k += 1;
    }
    Ok(SquarefreeDecomposition { content, parts })
}

/// Refine an approximate simple real root of `p` to `target_places` correct
/// decimal places (absolute error ≤ 10^-target_places, certified by an
/// exact sign-change check).
pub fn refine_root(
    p: &IntPolynomial,
    seed: &Real,
    target_places: u32,
) -> Result<Real, FactorError> {
    let seed_q = real_to_rational(seed);
    let pq = p.evaluate_rational(&seed_q);
    if pq == Rational::ZERO {
        // already exact; report it at the requested resolution
        return Ok(crate::polyarith::real_roots_exact_point(&seed_q, target_places));
    }
    // Expand a bracket around the seed until the sign changes.
    let mut radius = real_to_rational(&resolution(seed));
    let two = Rational::from(Int::from(2));
    for _ in 0..64 {
        let lo = &seed_q - &radius;
        let hi = &seed_q + &radius;
        let sl = p.evaluate_rational(&lo);
        let sh = p.evaluate_rational(&hi);
        if sl == Rational::ZERO || sh == Rational::ZERO {
            radius /= Rational::from(Int::from(3));
            continue;
        }
        if (sl > Rational::ZERO) != (sh > Rational::ZERO) {
            return refine_in_interval(p, &lo, &hi, target_places).map_err(FactorError::from);
        }
        radius *= &two;
    }
    Err(FactorError::Refinement(RootError::RefinementFailed(
        "no sign change found around the seed".into(),
    )))
}

/// Factor a univariate integer polynomial over Z.
pub fn factor_over_integers(job: &FactorJob) -> Result<FactorList, FactorError> {
    let p = &job.input;
    match p.degree() {
        None => {
            return Err(FactorError::InvalidInput(
                "cannot factor the zero polynomial".into(),
            ))
        }
        Some(0) => {
            return Err(FactorError::InvalidInput(
                "cannot factor a constant polynomial".into(),
            ))
        }
        Some(_) => {}
    }
    let decomp = squarefree_decompose(p)?;
    let job_degree = p.degree().unwrap();
    let max_scan = job.max_scan_degree.unwrap_or(job_degree / 2).max(1);

    let mut factors: Vec<(IntPolynomial, u32, CertTag)> = Vec::new();
    let mut partial = false;
    for (part, mult) in &decomp.parts {
        let (fs, part_partial) = factor_squarefree(part, max_scan, job)?;
        partial |= part_partial;
        for (f, tag) in fs {
            factors.push((f, *mult, tag));
        }
    }
    factors.sort_by(|a, b| {
        let da = a.0.degree().unwrap_or(0);
        let db = b.0.degree().unwrap_or(0);
        da.cmp(&db).then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let list = FactorList {
        content: decomp.content,
        factors,
        partial,
    };
    debug_assert_eq!(list.reconstitute(), *p);
    Ok(list)
}

/// Factor one primitive squarefree polynomial. Returns the factor list and
/// whether any root was abandoned for precision reasons.
fn factor_squarefree(
    part: &IntPolynomial,
    max_scan: usize,
    job: &FactorJob,
) -> Result<(Vec<(IntPolynomial, CertTag)>, bool), FactorError> {
    let mut q = part.clone();
    let mut out: Vec<(IntPolynomial, CertTag)> = Vec::new();
    let mut partial = false;

    // x divides at most once (squarefree input).
    if q.coeff(0).is_zero() {
        let x = IntPolynomial::from_i64(&[0, 1]);
        q = q.exact_divide(&x).expect("x divides");
        out.push((x, CertTag::Exact));
    }

    'outer: loop {
        let deg_q = match q.degree() {
            None | Some(0) => break,
            Some(1) => {
                out.push((q.with_positive_leading(), CertTag::Exact));
                q = IntPolynomial::constant(Int::ONE);
                break;
            }
            Some(d) => d,
        };
        let intervals = isolate_real_roots(&q).map_err(FactorError::from)?;
        if intervals.is_empty() {
            break;
        }
        for (lo, hi) in &intervals {
            for d in 1..=max_scan.min(deg_q / 2) {
                let bound = job
                    .height_override
                    .clone()
                    .unwrap_or_else(|| mignotte_factor_bound(&q, d));
                match try_degree(&q, lo, hi, d as u32, &bound, job) {
                    Ok(Some(factor)) => {
                        if let Some(quot) = q.exact_divide(&factor) {
                            out.push((factor, CertTag::Exact));
                            q = quot;
                            continue 'outer;
                        }
                    }
                    Ok(None) => {}
                    Err(FactorError::Refinement(_)) => {
                        partial = true;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        break;
    }

    if q.degree().map_or(false, |d| d >= 1) {
        let q = q.with_positive_leading();
        let tag = if q.degree() == Some(1) || eisenstein(&q).is_some() {
            CertTag::Exact
        } else {
            CertTag::Heuristic
        };
        out.push((q, tag));
    }
    Ok((out, partial))
}

/// One reconstruction attempt: refine the root in its isolating interval to
/// the digits the (degree, height-bound) pair demands, reconstruct, verify,
/// and retry once at double the digits on an unverified result.
fn try_degree(
    q: &IntPolynomial,
    lo: &Rational,
    hi: &Rational,
    degree: u32,
    bound: &Int,
    job: &FactorJob,
) -> Result<Option<IntPolynomial>, FactorError> {
    let base_places = required_digits(degree, bound) + 5;
    let mut places = base_places;
    for _attempt in 0..2 {
        let root = refine_in_interval(q, lo, hi, places).map_err(FactorError::from)?;
        let ctx = context_for(&root, places, job);
        let triple = AlgebraicTriple::new(root, degree, bound.clone())
            .map_err(|e| FactorError::InvalidInput(e.to_string()))?;
        match crate::minpoly::reconstruct_minpoly(&triple, &ctx) {
            Ok(report) if report.verified => return Ok(Some(report.polynomial)),
            Ok(_) => {
                // unverified: refine to double the digits once, then give up
                places = 2 * places;
                continue;
            }
            Err(ReconstructError::NoRelationFound { .. })
            | Err(ReconstructError::PrecisionExhausted { .. }) => return Ok(None),
            Err(e) => return Err(FactorError::InvalidInput(e.to_string())),
        }
    }
    Ok(None)
}

fn context_for(root: &Real, places: u32, job: &FactorJob) -> NumericContext {
    let sig = root.precision() as u32;
    let digits = sig.max(places) + job.ctx.guard_digits;
    NumericContext::with_guard(digits.max(job.ctx.digits), job.ctx.guard_digits)
        .expect("digits >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_decimal, pow10};
    use dashu_base::Abs;

    fn ctx(digits: u32) -> NumericContext {
        NumericContext::new(digits).unwrap()
    }

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    #[test]
    fn squarefree_of_squarefree_is_identity() {
        let q = p(&[1, -3, 1]);
        let (sf, decomp) = squarefree_part(&q).unwrap();
        assert_eq!(sf, q);
        assert_eq!(decomp.parts, vec![(q, 1)]);
    }

    #[test]
    fn squarefree_with_multiplicities() {
        // (x−1)²(x+2)
        let q = p(&[-1, 1]).multiply(&p(&[-1, 1])).multiply(&p(&[2, 1]));
        let decomp = squarefree_decompose(&q).unwrap();
        assert_eq!(
            decomp.parts,
            vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]
        );
        // reconstitution
        let mut acc = IntPolynomial::constant(decomp.content.clone());
        for (f, m) in &decomp.parts {
            for _ in 0..*m {
                acc = acc.multiply(f);
            }
        }
        assert_eq!(acc, q);
    }

    #[test]
    fn squarefree_of_cube() {
        let q = p(&[0, 0, 0, 1]); // x³
        let decomp = squarefree_decompose(&q).unwrap();
        assert_eq!(decomp.parts, vec![(p(&[0, 1]), 3)]);
    }

    #[test]
    fn refine_root_sqrt2_to_30_digits() {
        let q = p(&[-2, 0, 1]);
        let c = ctx(20);
        let seed = parse_decimal("1.4", &c).unwrap().value;
        let r = refine_root(&q, &seed, 30).unwrap();
        let want = "1.414213562373095048801688724209698078569671875377"
            .parse::<Real>()
            .unwrap();
        assert!((real_to_rational(&r) - real_to_rational(&want)).abs()
            <= real_to_rational(&pow10(-30)));
    }

    #[test]
    fn refine_root_noop_when_exact() {
        let q = p(&[-7, 1]);
        let c = ctx(20);
        let seed = parse_decimal("7", &c).unwrap().value;
        let r = refine_root(&q, &seed, 12).unwrap();
        assert_eq!(real_to_rational(&r), Rational::from(Int::from(7)));
    }

    #[test]
    fn refine_root_example4_largest() {
        let q = p(&[1, -7, 10, 7, -9, 2, 0, 1, -3, 1]);
        let c = ctx(20);
        let seed = parse_decimal("2.6", &c).unwrap().value;
        let r = refine_root(&q, &seed, 12).unwrap();
        // (3+√5)/2 = 2.618033988749894848...
        let want = "2.618033988749894848".parse::<Real>().unwrap();
        assert!((real_to_rational(&r) - real_to_rational(&want)).abs()
            <= real_to_rational(&pow10(-12)));
    }

    #[test]
    fn factor_difference_of_squares() {
        let job = FactorJob::new(p(&[-1, 0, 1]), ctx(20));
        let list = factor_over_integers(&job).unwrap();
        assert_eq!(list.content, Int::ONE);
        let fs: Vec<&IntPolynomial> = list.factors.iter().map(|(f, _, _)| f).collect();
        assert_eq!(fs, vec![&p(&[-1, 1]), &p(&[1, 1])]);
        assert!(!list.partial);
        assert_eq!(list.reconstitute(), p(&[-1, 0, 1]));
    }

    #[test]
    fn factor_example4() {
        let input = p(&[3, -21, 30, 21, -27, 6, 0, 3, -9, 3]);
        let job = FactorJob::new(input.clone(), ctx(20));
        let list = factor_over_integers(&job).unwrap();
        assert_eq!(list.content, Int::from(3));
        let fs: Vec<(&IntPolynomial, u32)> =
            list.factors.iter().map(|(f, m, _)| (f, *m)).collect();
        assert_eq!(
            fs,
            vec![(&p(&[1, -3, 1]), 1), (&p(&[1, -4, -3, 2, 0, 0, 0, 1]), 1)]
        );
        assert_eq!(list.reconstitute(), input);
        assert!(!list.partial);
        // the quadratic is certified, the septic stays heuristic
        assert_eq!(list.factors[0].2, CertTag::Exact);
        assert_eq!(list.factors[1].2, CertTag::Heuristic);
    }

    #[test]
    fn factor_with_multiplicity_and_content() {
        // -6·(x−1)²·(2x+3)
        let input = IntPolynomial::constant(Int::from(-6))
            .multiply(&p(&[-1, 1]))
            .multiply(&p(&[-1, 1]))
            .multiply(&p(&[3, 2]));
        let job = FactorJob::new(input.clone(), ctx(20));
        let list = factor_over_integers(&job).unwrap();
        assert_eq!(list.content, Int::from(-6));
        let fs: Vec<(&IntPolynomial, u32)> =
            list.factors.iter().map(|(f, m, _)| (f, *m)).collect();
        assert_eq!(fs, vec![(&p(&[-1, 1]), 2), (&p(&[3, 2]), 1)]);
        assert_eq!(list.reconstitute(), input);
    }

    #[test]
    fn factor_random_quadratic_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let mut done = 0;
        while done < 12 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                IntPolynomial::from_i64(&[
                    rng.gen_range(-30i64..=30),
                    rng.gen_range(-30i64..=30),
                    rng.gen_range(1i64..=30),
                ])
            };
            let g = mk(&mut rng);
            let h = mk(&mut rng);
            // keep primitive quadratics that are irreducible (discriminant
            // not a perfect square) with real roots (discriminant > 0, so
            // the root-reconstruction method applies), and distinct
            let irreducible = |f: &IntPolynomial| {
                let a = f.coeff(2);
                let b = f.coeff(1);
                let c0 = f.coeff(0);
                let disc = &b * &b - Int::from(4) * &a * &c0;
                if disc <= Int::ZERO {
                    return false;
                }
                let r = crate::numerics::int_sqrt_floor(&disc);
                &r * &r != disc
            };
            if g.content().unwrap() != Int::ONE || h.content().unwrap() != Int::ONE {
                continue;
            }
            if !irreducible(&g) || !irreducible(&h) || g == h {
                continue;
            }
            let input = g.multiply(&h);
            let job = FactorJob::new(input.clone(), ctx(20));
            let list = factor_over_integers(&job).unwrap();
            assert_eq!(list.reconstitute(), input, "identity for {input}");
            let mut got: Vec<IntPolynomial> =
                list.factors.iter().map(|(f, _, _)| f.clone()).collect();
            let mut want = vec![g.with_positive_leading(), h.with_positive_leading()];
            got.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
            want.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
            assert_eq!(got, want, "factors of {input}");
            done += 1;
        }
    }
}
