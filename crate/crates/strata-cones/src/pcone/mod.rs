//! Weight-space cones attached to a cyclic stratum context.
//!
//! Everything here glues the combinatorics of [`crate::cyclic`] to the
//! exact cone engine in [`crate::polycone`]: normalized p-linear forms,
//! partial Hasse-invariant weights and their cone (built by two
//! independent routes that are always cross-checked), the homogeneous
//! stratum cone, generator systems, and the auxiliary cones used by the
//! verification suites.

pub mod poly;

use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::cyclic::{
    chain_diagram, interval, phi, reduce, CyclicError, Index, IndexSet, IntervalKind, SigmaShift,
};
use crate::polycone::{linalg, ConeError, LinearForm, PolyCone, Weight};

#[derive(Debug, Error)]
pub enum PConeError {
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("characteristic must be at least 2, got {0}")]
    BadCharacteristic(BigInt),
    #[error("the generator and adjugate routes disagree for the partial Hasse cone")]
    RouteMismatch {
        generators: Box<PolyCone>,
        adjugate: Box<PolyCone>,
    },
    #[error("every index is compact; lambda generators need a noncompact index")]
    AllCompact,
    #[error("blocks sum to {total}, expected {expected}")]
    BadPartition { total: usize, expected: usize },
    #[error("block {block} contains no stratum element")]
    EmptyFactor { block: usize },
    #[error("not a normalized p-expression: {reason}")]
    NotNormalForm { reason: String },
}

fn check_p(p: &BigInt) -> Result<(), PConeError> {
    if p < &BigInt::from(2) {
        return Err(PConeError::BadCharacteristic(p.clone()));
    }
    Ok(())
}

fn power(p: &BigInt, e: usize) -> BigInt {
    num::pow::pow(p.clone(), e)
}

/// A stratum of the cyclic setting: circle size `n`, compact type `R`,
/// stratum set `S` (nonempty), and an integer characteristic `p >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumContext {
    n: usize,
    r: IndexSet,
    s: IndexSet,
    p: BigInt,
}

impl StratumContext {
    pub fn new(n: usize, r: IndexSet, s: IndexSet, p: BigInt) -> Result<Self, PConeError> {
        for set in [&r, &s] {
            if set.n() != n {
                return Err(CyclicError::AmbientMismatch {
                    expected: n,
                    found: set.n(),
                }
                .into());
            }
        }
        if s.is_empty() {
            return Err(CyclicError::EmptyStratum.into());
        }
        check_p(&p)?;
        Ok(StratumContext { n, r, s, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &IndexSet {
        &self.r
    }

    pub fn s(&self) -> &IndexSet {
        &self.s
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    /// The sign set of the homogeneous cone attached to this stratum.
    pub fn phi(&self) -> Result<IndexSet, PConeError> {
        Ok(phi(self.n, &self.r, &self.s)?)
    }

    pub fn sigma_shift(&self, t: i64) -> StratumContext {
        StratumContext {
            n: self.n,
            r: self.r.sigma_shift(t),
            s: self.s.sigma_shift(t),
            p: self.p.clone(),
        }
    }
}

impl fmt::Display for StratumContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} R={} S={} p={}", self.n, self.r, self.s, self.p)
    }
}

/// The normalized p-linear form `F` with anchor `d` and sign set `T`:
/// the coefficient of `x_j` is `p^((j - d) mod n)`, negated exactly when
/// `j` lies in `T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PExpression {
    n: usize,
    d: Index,
    t: IndexSet,
}

impl PExpression {
    pub fn new(n: usize, d: Index, t: IndexSet) -> Result<PExpression, PConeError> {
        if t.n() != n {
            return Err(CyclicError::AmbientMismatch {
                expected: n,
                found: t.n(),
            }
            .into());
        }
        if d == 0 || d > n {
            return Err(CyclicError::IndexOutOfRange { index: d, n }.into());
        }
        Ok(PExpression { n, d, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The anchor index `d` (where the coefficient is a unit).
    pub fn anchor(&self) -> Index {
        self.d
    }

    pub fn sign_set(&self) -> &IndexSet {
        &self.t
    }

    /// Exponent of the coefficient of `x_j`.
    pub fn exponent(&self, j: Index) -> usize {
        reduce(j as i64 - self.d as i64, self.n) % self.n
    }

    /// Concrete coefficient vector at characteristic `p`.
    pub fn form(&self, p: &BigInt) -> LinearForm {
        let coeffs = (1..=self.n)
            .map(|j| BigInt::from(self.t.sign_at(j as i64)) * power(p, self.exponent(j)))
            .collect();
        LinearForm(coeffs)
    }

    /// Recognizes a concrete coefficient vector as a normalized
    /// p-expression.  Because `p >= 2`, the anchor is the unique index
    /// with a unit coefficient, so the representation is unambiguous.
    pub fn parse(form: &LinearForm, p: &BigInt) -> Result<PExpression, PConeError> {
        check_p(p)?;
        let n = form.coeffs().len();
        let anchors: Vec<Index> = (1..=n)
            .filter(|&j| form.coeffs()[j - 1].abs().is_one())
            .collect();
        let [d] = anchors[..] else {
            return Err(PConeError::NotNormalForm {
                reason: format!(
                    "expected exactly one unit coefficient, found {}",
                    anchors.len()
                ),
            });
        };
        let mut members = Vec::new();
        for j in 1..=n {
            let e = reduce(j as i64 - d as i64, n) % n;
            let c = &form.coeffs()[j - 1];
            if c.abs() != power(p, e) {
                return Err(PConeError::NotNormalForm {
                    reason: format!("the coefficient of x_{j} is not a signed power p^{e}"),
                });
            }
            if c.is_negative() {
                members.push(j);
            }
        }
        PExpression::new(n, d, IndexSet::from_members(n, members)?)
    }
}

impl fmt::Display for PExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in 1..=self.n {
            let neg = self.t.contains(j);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match self.exponent(j) {
                0 => write!(f, "x_{j}")?,
                1 => write!(f, "p x_{j}")?,
                e => write!(f, "p^{e} x_{j}")?,
            }
        }
        Ok(())
    }
}

/// A cone cut out by normalized p-expressions, together with the
/// stratum context it belongs to.
#[derive(Clone, Debug)]
pub struct PCone {
    pub context: StratumContext,
    pub expressions: Vec<PExpression>,
    pub cone: PolyCone,
}

impl PCone {
    pub fn classify(&self) -> Result<Classification, PConeError> {
        classify(&self.context, &self.expressions)
    }
}

/// Weight of the partial Hasse invariant at index `i`: the `e_i` part
/// has sign `+` exactly when `i` lies in `S`, and the `e_{i-1}` part is
/// `-p` times the sign of `R` at `i - 1`.  For `n = 1` both parts land
/// on the single coordinate.
pub fn ha_weight(ctx: &StratumContext, i: Index) -> Result<Weight, PConeError> {
    let n = ctx.n();
    if i == 0 || i > n {
        return Err(CyclicError::IndexOutOfRange { index: i, n }.into());
    }
    let mut w = vec![BigInt::zero(); n];
    w[i - 1] += BigInt::from(-ctx.s().sign_at(i as i64));
    let prev = reduce(i as i64 - 1, n);
    w[prev - 1] -= ctx.p() * BigInt::from(ctx.r().sign_at(prev as i64));
    Ok(w)
}

/// Weight of the stratum generator at `i` (defined for `i` in `S`): the
/// `e_i` sign comes from `Phi(S)` instead of `S`.
pub fn gen_weight(ctx: &StratumContext, i: Index) -> Result<Weight, PConeError> {
    if !ctx.s().contains(i) {
        return Err(CyclicError::NotAMember { index: i }.into());
    }
    let n = ctx.n();
    let t = ctx.phi()?;
    let mut w = vec![BigInt::zero(); n];
    w[i - 1] += BigInt::from(t.sign_at(i as i64));
    let prev = reduce(i as i64 - 1, n);
    w[prev - 1] -= ctx.p() * BigInt::from(ctx.r().sign_at(prev as i64));
    Ok(w)
}

/// Saturated lattice spanned by the Hasse weights at indices outside
/// `S`, as a row-HNF basis.  This is the common kernel of the stratum's
/// p-expressions.
pub fn kernel_ks(ctx: &StratumContext) -> Result<Vec<Weight>, PConeError> {
    let outside: Vec<Weight> = ctx
        .s()
        .complement()
        .members()
        .into_iter()
        .map(|i| ha_weight(ctx, i))
        .collect::<Result<_, _>>()?;
    Ok(linalg::saturate(&outside, ctx.n()))
}

/// The cyclic bidiagonal matrix with diagonal `a` and cyclic
/// superdiagonal `-b` (the corner entry sits at row `n`, column `1`).
/// Its columns at the stratum signs are exactly the Hasse weights.
pub fn cyclic_bidiagonal(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    assert_eq!(n, b.len(), "diagonal lengths differ");
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        m[i][i] += &a[i];
        m[i][(i + 1) % n] -= &b[i];
    }
    m
}

/// Product of `x` over the cyclic interval `[from, to]`, with the empty
/// convention: the value is `1` when `from` is the successor of `to`.
fn j_product(x: &[BigInt], from: i64, to: i64) -> BigInt {
    let n = x.len();
    let f = reduce(from, n);
    if f == reduce(to + 1, n) {
        return BigInt::one();
    }
    interval(f, reduce(to, n), n, IntervalKind::Closed)
        .expect("reduced indices are in range")
        .into_iter()
        .map(|k| x[k - 1].clone())
        .product()
}

/// Adjugate of `cyclic_bidiagonal(a, b)` by the closed product formula:
/// entry `(i, j)` multiplies the `a`-values over `]j, i-1]` with the
/// `b`-values over `[i, j-1]`.  Cross-checked against the cofactor
/// definition in the tests; this route never computes a determinant.
pub fn adjugate_closed_form(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    assert_eq!(n, b.len(), "diagonal lengths differ");
    (1..=n as i64)
        .map(|i| {
            (1..=n as i64)
                .map(|j| j_product(a, j + 1, i - 1) * j_product(b, i, j - 1))
                .collect()
        })
        .collect()
}

/// Diagonal signs of the stratum matrix: `+1` on `S`, `-1` elsewhere.
fn stratum_diagonals(ctx: &StratumContext) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = ctx.n();
    let a = (1..=n)
        .map(|i| BigInt::from(-ctx.s().sign_at(i as i64)))
        .collect();
    let b = (1..=n)
        .map(|i| ctx.p() * BigInt::from(ctx.r().sign_at(i as i64)))
        .collect();
    (a, b)
}

/// Sign set of the `i`-th inequality of the partial Hasse cone, by the
/// parity rule: `j` gets a negative sign exactly when `R` seen on
/// `[j, i-1]` and the complement of `S` seen on `]j, i-1]` have counts
/// of different parity.  (`[i, i-1]` is the full circle.)
pub fn rho_pha(r: &IndexSet, s: &IndexSet, i: Index) -> Result<IndexSet, PConeError> {
    let n = r.n();
    if s.n() != n {
        return Err(CyclicError::AmbientMismatch {
            expected: n,
            found: s.n(),
        }
        .into());
    }
    if !s.contains(i) {
        return Err(CyclicError::NotAMember { index: i }.into());
    }
    let prev = reduce(i as i64 - 1, n);
    let mut members = Vec::new();
    for j in 1..=n {
        let closed = interval(j, prev, n, IntervalKind::Closed)?;
        let half_open = interval(j, prev, n, IntervalKind::OpenLeft)?;
        let in_r = closed.iter().filter(|&&k| r.contains(k)).count();
        let outside_s = half_open.iter().filter(|&&k| !s.contains(k)).count();
        if (in_r + outside_s) % 2 == 1 {
            members.push(j);
        }
    }
    Ok(IndexSet::from_members(n, members)?)
}

/// Partial Hasse cone from its generator system: rays are the Hasse
/// weights on `S`, the lineality is spanned by the weights off `S`.
pub fn cone_pha_generators(ctx: &StratumContext) -> Result<PolyCone, PConeError> {
    let rays = ctx
        .s()
        .members()
        .into_iter()
        .map(|i| ha_weight(ctx, i))
        .collect::<Result<_, _>>()?;
    let lineality = ctx
        .s()
        .complement()
        .members()
        .into_iter()
        .map(|i| ha_weight(ctx, i))
        .collect::<Result<_, _>>()?;
    Ok(PolyCone::from_generators(ctx.n(), rays, lineality)?)
}

/// Partial Hasse cone from the inequality side: the stratum matrix is
/// always invertible, so the cone is cut out by the `|S|` adjugate rows
/// at stratum indices, oriented against the determinant sign.  Each row
/// is a normalized p-expression; the parsed expressions are returned
/// with the cone.
pub fn cone_pha_adjugate(ctx: &StratumContext) -> Result<(PolyCone, Vec<PExpression>), PConeError> {
    let n = ctx.n();
    let (a, b) = stratum_diagonals(ctx);
    let adj = adjugate_closed_form(&a, &b);
    // det = prod(a) - prod(b) and |prod(b)| = p^n > 1 = |prod(a)|, so
    // the sign of the determinant is opposite to the sign of prod(b).
    let minus_det_sign = BigInt::from(if ctx.r().len() % 2 == 0 { 1 } else { -1 });
    let mut forms = Vec::with_capacity(ctx.s().len());
    let mut expressions = Vec::with_capacity(ctx.s().len());
    for i in ctx.s().members() {
        let row: Vec<BigInt> = (0..n).map(|j| &minus_det_sign * &adj[i - 1][j]).collect();
        let form = LinearForm(row);
        expressions.push(PExpression::parse(&form, ctx.p())?);
        forms.push(form);
    }
    Ok((PolyCone::from_forms(n, forms)?, expressions))
}

/// The partial Hasse cone, computed by both routes and cross-checked.
/// The returned cone is the inequality-side one, so membership
/// certificates point at p-expression rows.
pub fn cone_pha(ctx: &StratumContext) -> Result<PCone, PConeError> {
    let by_generators = cone_pha_generators(ctx)?;
    let (by_adjugate, expressions) = cone_pha_adjugate(ctx)?;
    if by_generators.equals(&by_adjugate).is_err() {
        return Err(PConeError::RouteMismatch {
            generators: Box::new(by_generators),
            adjugate: Box::new(by_adjugate),
        });
    }
    Ok(PCone {
        context: ctx.clone(),
        expressions,
        cone: by_adjugate,
    })
}

/// The homogeneous stratum cone: one p-expression per stratum index,
/// all carrying the sign set `Phi(S)`.
pub fn cone_crs(ctx: &StratumContext) -> Result<PCone, PConeError> {
    let t = ctx.phi()?;
    let expressions: Vec<PExpression> = ctx
        .s()
        .members()
        .into_iter()
        .map(|i| PExpression::new(ctx.n(), i, t))
        .collect::<Result<_, _>>()?;
    let forms = expressions.iter().map(|e| e.form(ctx.p())).collect();
    Ok(PCone {
        context: ctx.clone(),
        expressions,
        cone: PolyCone::from_forms(ctx.n(), forms)?,
    })
}

/// Structural flags of a system of p-expressions over a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    /// The anchors are exactly the stratum indices, once each.
    pub s_adapted: bool,
    /// All sign sets coincide.
    pub homogeneous: bool,
    /// Every sign set is admissible for the chain diagram.
    pub admissible: bool,
    /// Each expression's sign at its leading index matches `R` there.
    pub positive: bool,
    /// Admissible, and positive at every stratum index left out of the
    /// sign set.
    pub hasse_admissible: bool,
}

impl Classification {
    pub fn all(&self) -> bool {
        self.s_adapted && self.homogeneous && self.admissible && self.positive
            && self.hasse_admissible
    }
}

pub fn classify(
    ctx: &StratumContext,
    expressions: &[PExpression],
) -> Result<Classification, PConeError> {
    let n = ctx.n();
    let diagram = chain_diagram(n, ctx.r(), ctx.s())?;
    let mut anchors: Vec<Index> = expressions.iter().map(PExpression::anchor).collect();
    anchors.sort_unstable();
    let s_adapted = anchors == ctx.s().members();
    let homogeneous = expressions
        .windows(2)
        .all(|w| w[0].sign_set() == w[1].sign_set());
    let mut admissible = true;
    let mut positive = true;
    let mut hasse_admissible = true;
    for e in expressions {
        let t = e.sign_set();
        let e_admissible = diagram.is_admissible(t)?;
        admissible &= e_admissible;
        let lead = reduce(e.anchor() as i64 - 1, n);
        positive &= t.contains(lead) == ctx.r().contains(lead);
        let e_positive_off_t = ctx.s().members().into_iter().all(|j| {
            if t.contains(j) {
                return true;
            }
            let prev = reduce(j as i64 - 1, n);
            t.contains(prev) == ctx.r().contains(prev)
        });
        hasse_admissible &= e_admissible && e_positive_off_t;
    }
    Ok(Classification {
        s_adapted,
        homogeneous,
        admissible,
        positive,
        hasse_admissible,
    })
}

/// The coordinate cone retaining only the leading term of each
/// expression: the sign of `x_{d-1}` as `p` grows without bound.
pub fn limit_cone(n: usize, expressions: &[PExpression]) -> Result<PolyCone, PConeError> {
    let mut forms = Vec::with_capacity(expressions.len());
    for e in expressions {
        let lead = reduce(e.anchor() as i64 - 1, n);
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[lead - 1] = BigInt::from(e.sign_set().sign_at(lead as i64));
        forms.push(LinearForm(coeffs));
    }
    Ok(PolyCone::from_forms(n, forms)?)
}

/// Closed Griffiths-Schmid region: `x_i >= 0` on `R`, `x_i <= 0` off
/// `R`.
pub fn cone_gs(r: &IndexSet) -> PolyCone {
    let n = r.n();
    let forms = (1..=n)
        .map(|i| {
            let mut coeffs = vec![BigInt::zero(); n];
            // sign_at is -1 on members: -x_i <= 0 on R, x_i <= 0 off R.
            coeffs[i - 1] = BigInt::from(r.sign_at(i as i64));
            LinearForm(coeffs)
        })
        .collect();
    PolyCone::from_forms(n, forms).expect("coordinate forms are valid")
}

/// Strict interior conditions of the Griffiths-Schmid region.
pub fn gs_strict_member(r: &IndexSet, w: &[BigInt]) -> bool {
    assert_eq!(w.len(), r.n(), "weight has wrong ambient dimension");
    (1..=r.n()).all(|i| {
        if r.contains(i) {
            w[i - 1].is_positive()
        } else {
            w[i - 1].is_negative()
        }
    })
}

/// Dominant region: `x_i >= 0` at compact indices.
pub fn cone_dominant(r: &IndexSet) -> PolyCone {
    let n = r.n();
    let forms = r
        .members()
        .into_iter()
        .map(|i| {
            let mut coeffs = vec![BigInt::zero(); n];
            coeffs[i - 1] = BigInt::from(-1);
            LinearForm(coeffs)
        })
        .collect();
    PolyCone::from_forms(n, forms).expect("coordinate forms are valid")
}

/// The lowest-weight cone: dominant weights satisfying every
/// p-expression with sign set `R`.  When every index is compact the
/// expressions are redundant and the cone is the dominant orthant.
pub fn cone_lw(r: &IndexSet, p: &BigInt) -> Result<PolyCone, PConeError> {
    check_p(p)?;
    let n = r.n();
    if r.is_full() {
        return Ok(cone_dominant(r));
    }
    let mut forms: Vec<LinearForm> = (1..=n)
        .map(|d| PExpression::new(n, d, *r).map(|e| e.form(p)))
        .collect::<Result<_, _>>()?;
    for i in r.members() {
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[i - 1] = BigInt::from(-1);
        forms.push(LinearForm(coeffs));
    }
    Ok(PolyCone::from_forms(n, forms)?)
}

/// Generator system of the lowest-weight cone, indexed by the
/// noncompact indices in ascending order: each contributes one vector
/// per step of its gap back to the previous noncompact index, the last
/// step crossing over with a negative power.
pub fn lambda_generators(r: &IndexSet, p: &BigInt) -> Result<Vec<Weight>, PConeError> {
    check_p(p)?;
    let n = r.n();
    let noncompact = r.complement().members();
    if noncompact.is_empty() {
        return Err(PConeError::AllCompact);
    }
    let h = noncompact.len();
    let mut out = Vec::with_capacity(n);
    for (idx, &ri) in noncompact.iter().enumerate() {
        let prev = noncompact[(idx + h - 1) % h];
        let gap = reduce(ri as i64 - prev as i64, n);
        for k in 1..=gap {
            let mut v = vec![BigInt::zero(); n];
            v[ri - 1] += BigInt::one();
            let back = reduce(ri as i64 - k as i64, n);
            if k < gap {
                v[back - 1] += power(p, k);
            } else {
                // Last step: lands on the previous noncompact index.
                v[back - 1] -= power(p, k);
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Exact coordinates of a weight in the mixed basis: identity on
/// compact indices, and a scaled p-expression with sign set `R` at the
/// successor elsewhere.  A weight is in the lowest-weight cone exactly
/// when all coordinates are nonnegative.
pub fn minv_coords(
    r: &IndexSet,
    p: &BigInt,
    x: &[BigInt],
) -> Result<Vec<BigRational>, PConeError> {
    check_p(p)?;
    let n = r.n();
    if x.len() != n {
        return Err(ConeError::AmbientMismatch {
            expected: n,
            found: x.len(),
        }
        .into());
    }
    let denom = p * (power(p, n) - BigInt::one());
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        if r.contains(i) {
            out.push(BigRational::from_integer(x[i - 1].clone()));
        } else {
            let next = reduce(i as i64 + 1, n);
            let f = PExpression::new(n, next, *r)?.form(p);
            out.push(BigRational::new(-f.eval(x), denom.clone()));
        }
    }
    Ok(out)
}

/// Splits a stratum context along contiguous blocks of sizes `blocks`.
/// Fails when a block contains no stratum element, since the factor is
/// not a stratum then.
pub fn product_decompose(
    ctx: &StratumContext,
    blocks: &[usize],
) -> Result<Vec<StratumContext>, PConeError> {
    let n = ctx.n();
    let total: usize = blocks.iter().sum();
    if total != n || blocks.iter().any(|&m| m == 0) {
        return Err(PConeError::BadPartition { total, expected: n });
    }
    let mut out = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for (block, &m) in blocks.iter().enumerate() {
        let locals = |set: &IndexSet| -> Vec<Index> {
            (1..=m).filter(|&j| set.contains(offset + j)).collect()
        };
        let r = IndexSet::from_members(m, locals(ctx.r()))?;
        let s = IndexSet::from_members(m, locals(ctx.s()))?;
        if s.is_empty() {
            return Err(PConeError::EmptyFactor { block });
        }
        out.push(StratumContext::new(m, r, s, ctx.p().clone())?);
        offset += m;
    }
    Ok(out)
}

pub use crate::polycone::embed_block;

/// Parses every canonical facet of a cone as a p-expression.  Fails
/// when the cone is not cut out by normalized p-expressions.
pub fn parse_facets(cone: &PolyCone, p: &BigInt) -> Result<Vec<PExpression>, PConeError> {
    cone.canonical_h()
        .facets
        .iter()
        .map(|f| PExpression::parse(f, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: usize, r: &[usize], s: &[usize], p: i64) -> StratumContext {
        StratumContext::new(
            n,
            IndexSet::from_members(n, r.iter().copied()).unwrap(),
            IndexSet::from_members(n, s.iter().copied()).unwrap(),
            BigInt::from(p),
        )
        .unwrap()
    }

    fn set(n: usize, members: &[usize]) -> IndexSet {
        IndexSet::from_members(n, members.iter().copied()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn all_contexts(n: usize, p: i64) -> impl Iterator<Item = StratumContext> {
        IndexSet::all_subsets(n)
            .unwrap()
            .flat_map(move |r| {
                IndexSet::all_subsets(n)
                    .unwrap()
                    .filter(|s| !s.is_empty())
                    .map(move |s| StratumContext::new(n, r, s, BigInt::from(p)).unwrap())
            })
    }

    #[test]
    fn context_validation() {
        assert!(matches!(
            StratumContext::new(3, set(3, &[]), set(3, &[]), BigInt::from(2)),
            Err(PConeError::Cyclic(CyclicError::EmptyStratum))
        ));
        assert!(matches!(
            StratumContext::new(3, set(3, &[1]), set(3, &[1]), BigInt::from(1)),
            Err(PConeError::BadCharacteristic(_))
        ));
        assert!(matches!(
            StratumContext::new(3, set(2, &[1]), set(3, &[1]), BigInt::from(2)),
            Err(PConeError::Cyclic(CyclicError::AmbientMismatch { .. }))
        ));
    }

    #[test]
    fn expression_forms_and_parsing_roundtrip() {
        for c in all_contexts(5, 3) {
            let t = c.phi().unwrap();
            for d in 1..=5 {
                let e = PExpression::new(5, d, t).unwrap();
                let f = e.form(c.p());
                assert_eq!(PExpression::parse(&f, c.p()).unwrap(), e);
            }
        }
        // Not a p-expression: two unit coefficients.
        let bad = LinearForm(w(&[1, 1, 2]));
        assert!(matches!(
            PExpression::parse(&bad, &BigInt::from(2)),
            Err(PConeError::NotNormalForm { .. })
        ));
    }

    #[test]
    fn worked_example_inequalities_are_bit_exact() {
        // n = 8, R = {1,3}, S = {4,6}: the sign set is {3,4,6,8} and the
        // two defining inequalities have anchors 4 and 6.
        let c = ctx(8, &[1, 3], &[4, 6], 2);
        let t = c.phi().unwrap();
        assert_eq!(t, set(8, &[3, 4, 6, 8]));
        let crs = cone_crs(&c).unwrap();
        assert_eq!(
            crs.expressions[0].to_string(),
            "p^5 x_1 + p^6 x_2 - p^7 x_3 - x_4 + p x_5 - p^2 x_6 + p^3 x_7 - p^4 x_8"
        );
        assert_eq!(
            crs.expressions[1].to_string(),
            "p^3 x_1 + p^4 x_2 - p^5 x_3 - p^6 x_4 + p^7 x_5 - x_6 + p x_7 - p^2 x_8"
        );
        // Concrete coefficient vectors at p = 2.
        assert_eq!(
            crs.expressions[0].form(c.p()).0,
            w(&[32, 64, -128, -1, 2, -4, 8, -16])
        );
        assert_eq!(
            crs.expressions[1].form(c.p()).0,
            w(&[8, 16, -32, -64, 128, -1, 2, -4])
        );
    }

    #[test]
    fn hasse_weights_match_the_matrix_columns() {
        for c in all_contexts(4, 3) {
            let (a, b) = stratum_diagonals(&c);
            let m = cyclic_bidiagonal(&a, &b);
            for i in 1..=4 {
                let col: Weight = (0..4).map(|row| m[row][i - 1].clone()).collect();
                assert_eq!(ha_weight(&c, i).unwrap(), col, "{c} i={i}");
            }
        }
        // n = 1 accumulates both terms on the single coordinate.
        let c1 = ctx(1, &[1], &[1], 3);
        assert_eq!(ha_weight(&c1, 1).unwrap(), w(&[4]));
        let c1 = ctx(1, &[], &[1], 3);
        assert_eq!(ha_weight(&c1, 1).unwrap(), w(&[-2]));
    }

    #[test]
    fn determinant_closed_form_holds_on_stratum_matrices() {
        for n in 1..=5 {
            for c in all_contexts(n, 2) {
                let (a, b) = stratum_diagonals(&c);
                let m = cyclic_bidiagonal(&a, &b);
                let det = linalg::determinant(m);
                let prod_a: BigInt = a.iter().product();
                let prod_b: BigInt = b.iter().product();
                assert_eq!(det, prod_a - prod_b, "{c}");
                // Sign: opposite to the R-parity sign of prod(b).
                let expect_sign = if c.r().len() % 2 == 0 { -1 } else { 1 };
                assert_eq!(det.sign(), BigInt::from(expect_sign).sign(), "{c}");
            }
        }
    }

    #[test]
    fn closed_form_adjugate_matches_the_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xad9);
        for n in 1..=7 {
            for _ in 0..60 {
                let a: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
                let b: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
                let m = cyclic_bidiagonal(&a, &b);
                assert_eq!(
                    adjugate_closed_form(&a, &b),
                    linalg::cofactor_adjugate(&m),
                    "n={n} a={a:?} b={b:?}"
                );
            }
        }
    }

    #[test]
    fn both_pha_routes_agree_across_small_contexts() {
        for n in 1..=4 {
            for c in all_contexts(n, 2) {
                let checked = cone_pha(&c).unwrap();
                assert_eq!(checked.expressions.len(), c.s().len(), "{c}");
            }
        }
    }

    #[test]
    fn pha_inequalities_for_the_smallest_hilbert_case() {
        // n = 2, R empty, S full: x1 + p x2 <= 0 and p x1 + x2 <= 0.
        let c = ctx(2, &[], &[1, 2], 3);
        let (cone, exprs) = cone_pha_adjugate(&c).unwrap();
        assert_eq!(exprs[0].anchor(), 1);
        assert_eq!(exprs[0].sign_set(), &set(2, &[]));
        assert_eq!(exprs[1].sign_set(), &set(2, &[]));
        assert!(cone.contains(&w(&[1, -3])).is_ok());
        assert!(cone.contains(&w(&[-3, 1])).is_ok());
        assert!(cone.contains(&w(&[-1, -1])).is_ok());
        assert!(cone.contains(&w(&[1, -1])).is_err());
    }

    #[test]
    fn parity_rule_agrees_with_the_adjugate_rows() {
        for n in 1..=6 {
            for c in all_contexts(n, if n <= 4 { 2 } else { 3 }) {
                let (_, exprs) = cone_pha_adjugate(&c).unwrap();
                for e in &exprs {
                    let rule = rho_pha(c.r(), c.s(), e.anchor()).unwrap();
                    assert_eq!(e.sign_set(), &rule, "{c} anchor={}", e.anchor());
                }
            }
        }
    }

    #[test]
    fn endpoint_conventions_of_the_parity_rule_are_load_bearing() {
        // Moving either right endpoint one step left changes the sign
        // set: at n = 2, R = {1}, S = {2} the true sign set of the
        // anchor-2 row is {1}, but both truncated interval variants
        // leave 1 out.
        let c = ctx(2, &[1], &[2], 3);
        let (_, exprs) = cone_pha_adjugate(&c).unwrap();
        assert_eq!(exprs[0].sign_set(), &set(2, &[1]));
        let (i, n) = (2usize, 2usize);
        let prev = reduce(i as i64 - 1, n);
        for j in [1usize] {
            // Variant dropping i-1 from the closed R-interval.
            let closed_short = interval(j, prev, n, IntervalKind::OpenRight).unwrap();
            let half_open = interval(j, prev, n, IntervalKind::OpenLeft).unwrap();
            let in_r = closed_short.iter().filter(|&&k| c.r().contains(k)).count();
            let off_s = half_open.iter().filter(|&&k| !c.s().contains(k)).count();
            assert_eq!((in_r + off_s) % 2, 0, "variant misses index {j}");
        }
    }

    #[test]
    fn crs_is_full_dimensional_with_its_own_facets() {
        for c in all_contexts(4, 2) {
            let crs = cone_crs(&c).unwrap();
            assert_eq!(crs.cone.dim(), 4, "{c}");
            let parsed = parse_facets(&crs.cone, c.p()).unwrap();
            let mut expect = crs.expressions.clone();
            expect.sort();
            let mut got = parsed.clone();
            got.sort();
            assert_eq!(got, expect, "{c}");
        }
    }

    #[test]
    fn crs_classification_is_fully_positive() {
        for n in 1..=5 {
            for c in all_contexts(n, 2) {
                let crs = cone_crs(&c).unwrap();
                let flags = crs.classify().unwrap();
                assert!(flags.all(), "{c} {flags:?}");
            }
        }
    }

    #[test]
    fn stratum_generators_evaluate_to_the_norm_drop() {
        for n in 1..=5 {
            for c in all_contexts(n, 3) {
                let t = c.phi().unwrap();
                let drop = BigInt::one() - power(c.p(), n);
                for i in c.s().members() {
                    let g = gen_weight(&c, i).unwrap();
                    for j in c.s().members() {
                        let val = PExpression::new(n, j, t).unwrap().form(c.p()).eval(&g);
                        let expect = if i == j { drop.clone() } else { BigInt::zero() };
                        assert_eq!(val, expect, "{c} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_has_complementary_rank_and_kills_expressions() {
        for c in all_contexts(4, 2) {
            let k = kernel_ks(&c).unwrap();
            assert_eq!(k.len(), 4 - c.s().len(), "{c}");
            let crs = cone_crs(&c).unwrap();
            for v in &k {
                for e in &crs.expressions {
                    assert!(e.form(c.p()).eval(v).is_zero(), "{c}");
                }
            }
        }
    }

    #[test]
    fn lambda_generators_match_the_frozen_example() {
        let r = set(3, &[2]);
        let p = BigInt::from(2);
        assert_eq!(
            lambda_generators(&r, &p).unwrap(),
            vec![w(&[1, 0, -2]), w(&[0, 2, 1]), w(&[-4, 0, 1])]
        );
        // A single noncompact index wraps all the way around.
        let r1 = set(3, &[1, 2]);
        assert_eq!(
            lambda_generators(&r1, &p).unwrap(),
            vec![w(&[0, 2, 1]), w(&[4, 0, 1]), w(&[0, 0, -7])]
        );
        assert!(matches!(
            lambda_generators(&set(2, &[1, 2]), &p),
            Err(PConeError::AllCompact)
        ));
    }

    #[test]
    fn lowest_weight_cone_agrees_with_the_coordinate_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x10e);
        for n in 1..=4 {
            for r in IndexSet::all_subsets(n).unwrap() {
                let p = BigInt::from(3);
                let lw = cone_lw(&r, &p).unwrap();
                for _ in 0..120 {
                    let x: Weight =
                        (0..n).map(|_| BigInt::from(rng.gen_range(-40i64..=40))).collect();
                    let direct = lw.contains(&x).is_ok();
                    let coords = minv_coords(&r, &p, &x).unwrap();
                    let by_coords = coords.iter().all(|c| !c.is_negative());
                    assert_eq!(direct, by_coords, "n={n} R={r} x={x:?}");
                }
            }
        }
    }

    #[test]
    fn lambda_generators_span_the_lowest_weight_cone() {
        for n in 1..=4 {
            for r in IndexSet::all_subsets(n).unwrap().filter(|r| !r.is_full()) {
                let p = BigInt::from(2);
                let lw = cone_lw(&r, &p).unwrap();
                let gens = lambda_generators(&r, &p).unwrap();
                assert_eq!(gens.len(), n);
                assert!(lw.generates_modulo_kernel(&gens).is_generates(), "n={n} R={r}");
            }
        }
    }

    #[test]
    fn gs_and_dominant_regions() {
        let r = set(3, &[2]);
        let gs = cone_gs(&r);
        assert!(gs.contains(&w(&[-1, 5, -2])).is_ok());
        assert!(gs.contains(&w(&[1, 5, -2])).is_err());
        assert!(gs_strict_member(&r, &w(&[-1, 5, -2])));
        assert!(!gs_strict_member(&r, &w(&[0, 5, -2])));
        let dom = cone_dominant(&r);
        assert!(dom.contains(&w(&[-7, 0, 9])).is_ok());
        assert!(dom.contains(&w(&[-7, -1, 9])).is_err());
        // Empty R leaves no dominance constraint at all.
        assert!(cone_dominant(&set(2, &[]))
            .equals(&PolyCone::full_space(2))
            .is_ok());
    }

    #[test]
    fn limit_cone_of_the_worked_example() {
        // Anchors 4 and 6 with sign set {3,4,6,8}: the leading indices
        // are 3 (in the sign set) and 5 (not), giving -x_3 <= 0 and
        // x_5 <= 0.
        let c = ctx(8, &[1, 3], &[4, 6], 2);
        let crs = cone_crs(&c).unwrap();
        let lim = limit_cone(8, &crs.expressions).unwrap();
        let mut neg3 = vec![BigInt::zero(); 8];
        neg3[2] = BigInt::from(-1);
        let mut pos5 = vec![BigInt::zero(); 8];
        pos5[4] = BigInt::one();
        let expect = PolyCone::from_forms(8, vec![LinearForm(neg3), LinearForm(pos5)]).unwrap();
        assert!(lim.equals(&expect).is_ok());
    }

    #[test]
    fn product_decomposition_reindexes_blocks() {
        let c = ctx(6, &[1, 4, 5], &[2, 6], 5);
        let parts = product_decompose(&c, &[3, 3]).unwrap();
        assert_eq!(parts[0], ctx(3, &[1], &[2], 5));
        assert_eq!(parts[1], ctx(3, &[1, 2], &[3], 5));
        assert!(matches!(
            product_decompose(&c, &[1, 5]),
            Err(PConeError::EmptyFactor { block: 0 })
        ));
        assert!(matches!(
            product_decompose(&c, &[2, 2]),
            Err(PConeError::BadPartition { total: 4, expected: 6 })
        ));
        assert_eq!(embed_block(5, 2, &w(&[7, -7])), w(&[0, 0, 7, -7, 0]));
    }

    #[test]
    fn shifted_contexts_give_shifted_cones() {
        for c in all_contexts(4, 2) {
            let shifted = c.sigma_shift(1);
            let direct = cone_pha(&shifted).unwrap().cone;
            let moved = cone_pha(&c).unwrap().cone.sigma_shift(1);
            assert!(direct.equals(&moved).is_ok(), "{c}");
        }
    }
}
