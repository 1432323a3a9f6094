//! Exact rational polyhedral cones over the integer lattice.
//!
//! A [`PolyCone`] is the set of integer points of a rational polyhedral
//! cone in `Z^n`.  Saturation is built into the representation: every
//! operation works with the rational hull, so sums and intersections
//! always describe the full lattice of integer points of the resulting
//! rational cone.
//!
//! Each cone carries the description it was built from (inequality
//! forms or generators) and lazily computes canonical descriptions on
//! both sides: extreme rays reduced modulo the lineality space and a
//! row-HNF lineality basis on the generator side, facet forms and a
//! row-HNF equation basis on the inequality side.  Equality of cones is
//! decided by double inclusion of generators against inequalities, not
//! by comparing canonical forms, so the two routes check each other.

mod dd;
pub(crate) mod feas;
pub mod linalg;

use std::fmt;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::{BigRational, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

/// An integer weight vector in the ambient lattice `Z^n`.
pub type Weight = Vec<BigInt>;

/// A linear form `f` acting on weights as `f(x) = sum_i f_i x_i`.  Used
/// as a constraint it always means `f(x) <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub Vec<BigInt>);

impl LinearForm {
    pub fn eval(&self, w: &[BigInt]) -> BigInt {
        linalg::dot(&self.0, w)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn negated(&self) -> LinearForm {
        LinearForm(linalg::neg_vec(&self.0))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if mag == BigInt::from(1) {
                write!(f, "x_{}", i + 1)?;
            } else {
                write!(f, "{} x_{}", mag, i + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Canonical generator description: extreme rays reduced modulo the
/// lineality space, primitive and lexicographically sorted, plus the
/// saturated lineality lattice in row-HNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub rays: Vec<Weight>,
    pub lineality: Vec<Weight>,
}

/// Canonical inequality description: facet forms (the canonical rays of
/// the polar cone) plus a row-HNF basis of the equation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub facets: Vec<LinearForm>,
    pub equations: Vec<LinearForm>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConeError {
    #[error("expected vectors of length {expected}, found one of length {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("the zero vector is not a valid {role}")]
    ZeroVector { role: &'static str },
}

/// Produced when an inclusion check fails: `generator` lies in the
/// candidate subcone but violates `form` from the ambient cone.
#[derive(Clone, Debug)]
pub struct InclusionWitness {
    pub generator: Weight,
    pub form: LinearForm,
}

#[derive(Clone, Debug)]
pub enum EqualityFailure {
    LeftNotInRight(InclusionWitness),
    RightNotInLeft(InclusionWitness),
}

/// Result of asking whether a generating system spans a cone modulo its
/// lineality space.
#[derive(Clone, Debug)]
pub enum GeneratesOutcome {
    Generates,
    GeneratorOutside { index: usize, violated: LinearForm },
    RayNotReached { ray: Weight },
}

impl GeneratesOutcome {
    pub fn is_generates(&self) -> bool {
        matches!(self, GeneratesOutcome::Generates)
    }
}

#[derive(Clone)]
enum Source {
    Forms(Vec<LinearForm>),
    Generators {
        rays: Vec<Weight>,
        lineality: Vec<Weight>,
    },
}

/// Integer points of a rational polyhedral cone in `Z^n`.
#[derive(Clone)]
pub struct PolyCone {
    n: usize,
    source: Source,
    canon_v: OnceLock<VRep>,
    canon_h: OnceLock<HRep>,
}

fn check_vector(n: usize, v: &[BigInt], role: &'static str) -> Result<(), ConeError> {
    if v.len() != n {
        return Err(ConeError::AmbientMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if linalg::is_zero_vec(v) {
        return Err(ConeError::ZeroVector { role });
    }
    Ok(())
}

impl PolyCone {
    /// Cone `{x : f(x) <= 0 for every form f}`.
    pub fn from_forms(n: usize, forms: Vec<LinearForm>) -> Result<PolyCone, ConeError> {
        assert!(n > 0, "ambient dimension must be positive");
        for f in &forms {
            check_vector(n, &f.0, "inequality form")?;
        }
        Ok(PolyCone {
            n,
            source: Source::Forms(forms),
            canon_v: OnceLock::new(),
            canon_h: OnceLock::new(),
        })
    }

    /// Cone generated by `rays` (nonnegative combinations) and
    /// `lineality` (arbitrary combinations), then saturated.
    pub fn from_generators(
        n: usize,
        rays: Vec<Weight>,
        lineality: Vec<Weight>,
    ) -> Result<PolyCone, ConeError> {
        assert!(n > 0, "ambient dimension must be positive");
        for r in &rays {
            check_vector(n, r, "generating ray")?;
        }
        for l in &lineality {
            check_vector(n, l, "lineality generator")?;
        }
        Ok(PolyCone {
            n,
            source: Source::Generators { rays, lineality },
            canon_v: OnceLock::new(),
            canon_h: OnceLock::new(),
        })
    }

    pub fn full_space(n: usize) -> PolyCone {
        PolyCone::from_forms(n, Vec::new()).expect("no forms to validate")
    }

    pub fn zero(n: usize) -> PolyCone {
        PolyCone::from_generators(n, Vec::new(), Vec::new()).expect("no generators to validate")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical generator description, computed on first use.
    pub fn canonical_v(&self) -> &VRep {
        self.canon_v.get_or_init(|| match &self.source {
            Source::Forms(forms) => {
                let raw: Vec<Vec<BigInt>> = forms.iter().map(|f| f.0.clone()).collect();
                canonicalize(self.n, dd::double_description(self.n, &raw))
            }
            Source::Generators { .. } => {
                // Round-trip through the canonical inequality system so
                // that redundant input generators cannot leak through.
                let h = self.canonical_h();
                let mut raw: Vec<Vec<BigInt>> =
                    h.facets.iter().map(|f| f.0.clone()).collect();
                for e in &h.equations {
                    raw.push(e.0.clone());
                    raw.push(linalg::neg_vec(&e.0));
                }
                canonicalize(self.n, dd::double_description(self.n, &raw))
            }
        })
    }

    /// Canonical inequality description, computed on first use via the
    /// polar cone.
    pub fn canonical_h(&self) -> &HRep {
        self.canon_h.get_or_init(|| {
            let (rays, lineality) = match &self.source {
                Source::Forms(_) => {
                    let v = self.canonical_v();
                    (v.rays.clone(), v.lineality.clone())
                }
                Source::Generators { rays, lineality } => (rays.clone(), lineality.clone()),
            };
            // The polar cone {f : f(x) <= 0 on self} is cut out by one
            // form per ray and a pair of forms per lineality generator;
            // its canonical rays are exactly the facets of self and its
            // lineality is the annihilator of the span of self.
            let mut polar_forms = rays;
            for l in lineality {
                polar_forms.push(linalg::neg_vec(&l));
                polar_forms.push(l);
            }
            let pv = canonicalize(self.n, dd::double_description(self.n, &polar_forms));
            HRep {
                facets: pv.rays.into_iter().map(LinearForm).collect(),
                equations: pv.lineality.into_iter().map(LinearForm).collect(),
            }
        })
    }

    /// Saturated basis of the largest linear subspace contained in the
    /// cone, in row-HNF.
    pub fn lineality(&self) -> &[Weight] {
        &self.canonical_v().lineality
    }

    /// Dimension of the rational span of the cone.
    pub fn dim(&self) -> usize {
        self.n - self.canonical_h().equations.len()
    }

    /// Membership test; returns the first violated constraint on
    /// failure.  Cones built from forms check the raw forms, so the
    /// certificate refers to the caller's own inequality system.
    pub fn contains(&self, w: &[BigInt]) -> Result<(), LinearForm> {
        assert_eq!(w.len(), self.n, "weight has wrong ambient dimension");
        match &self.source {
            Source::Forms(forms) => {
                for f in forms {
                    if f.eval(w).is_positive() {
                        return Err(f.clone());
                    }
                }
                Ok(())
            }
            Source::Generators { .. } => {
                let h = self.canonical_h();
                for f in &h.facets {
                    if f.eval(w).is_positive() {
                        return Err(f.clone());
                    }
                }
                for e in &h.equations {
                    let val = e.eval(w);
                    if val.is_positive() {
                        return Err(e.clone());
                    }
                    if val.is_negative() {
                        return Err(e.negated());
                    }
                }
                Ok(())
            }
        }
    }

    /// Checks `self` is a subcone of `other` by testing every canonical
    /// generator of `self` against the canonical inequality system of
    /// `other`.
    pub fn is_subcone(&self, other: &PolyCone) -> Result<(), InclusionWitness> {
        assert_eq!(self.n, other.n, "ambient dimensions differ");
        let v = self.canonical_v();
        let h = other.canonical_h();
        let mut generators: Vec<Weight> = v.rays.clone();
        for l in &v.lineality {
            generators.push(l.clone());
            generators.push(linalg::neg_vec(l));
        }
        for g in generators {
            for f in &h.facets {
                if f.eval(&g).is_positive() {
                    return Err(InclusionWitness {
                        generator: g,
                        form: f.clone(),
                    });
                }
            }
            for e in &h.equations {
                let val = e.eval(&g);
                if val.is_zero() {
                    continue;
                }
                let form = if val.is_positive() { e.clone() } else { e.negated() };
                return Err(InclusionWitness { generator: g, form });
            }
        }
        Ok(())
    }

    /// Equality by double inclusion.
    pub fn equals(&self, other: &PolyCone) -> Result<(), EqualityFailure> {
        self.is_subcone(other)
            .map_err(EqualityFailure::LeftNotInRight)?;
        other
            .is_subcone(self)
            .map_err(EqualityFailure::RightNotInLeft)
    }

    /// Intersection, as the union of the two inequality systems.
    pub fn intersect(&self, other: &PolyCone) -> PolyCone {
        assert_eq!(self.n, other.n, "ambient dimensions differ");
        let mut forms = self.effective_forms();
        forms.extend(other.effective_forms());
        PolyCone {
            n: self.n,
            source: Source::Forms(forms),
            canon_v: OnceLock::new(),
            canon_h: OnceLock::new(),
        }
    }

    /// Saturated sum: the integer points of the rational hull of the
    /// union, as the cone generated by both generator systems.
    pub fn sum_saturated(&self, other: &PolyCone) -> PolyCone {
        assert_eq!(self.n, other.n, "ambient dimensions differ");
        let (mut rays, mut lineality) = self.effective_generators();
        let (r2, l2) = other.effective_generators();
        rays.extend(r2);
        lineality.extend(l2);
        PolyCone {
            n: self.n,
            source: Source::Generators { rays, lineality },
            canon_v: OnceLock::new(),
            canon_h: OnceLock::new(),
        }
    }

    /// Does `gens`, together with the lineality space, generate the
    /// cone?  Membership of the generators is checked against the
    /// inequality side; reachability of every canonical extreme ray is
    /// then decided by exact linear programming, so the two routes are
    /// independent.
    pub fn generates_modulo_kernel(&self, gens: &[Weight]) -> GeneratesOutcome {
        for (index, g) in gens.iter().enumerate() {
            if let Err(violated) = self.contains(g) {
                return GeneratesOutcome::GeneratorOutside { index, violated };
            }
        }
        let v = self.canonical_v();
        let cone: Vec<Vec<BigRational>> = gens.iter().map(|g| to_rat(g)).collect();
        let free: Vec<Vec<BigRational>> = v.lineality.iter().map(|l| to_rat(l)).collect();
        for ray in &v.rays {
            if !feas::in_cone_hull(&cone, &free, &to_rat(ray)) {
                return GeneratesOutcome::RayNotReached { ray: ray.clone() };
            }
        }
        GeneratesOutcome::Generates
    }

    /// Image under the cyclic rotation sending index `i` to `i + t`.
    pub fn sigma_shift(&self, t: i64) -> PolyCone {
        let n = self.n;
        let shift = |v: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); n];
            for (i, x) in v.iter().enumerate() {
                let j = crate::cyclic::reduce(i as i64 + 1 + t, n) - 1;
                out[j] = x.clone();
            }
            out
        };
        let source = match &self.source {
            Source::Forms(forms) => {
                Source::Forms(forms.iter().map(|f| LinearForm(shift(&f.0))).collect())
            }
            Source::Generators { rays, lineality } => Source::Generators {
                rays: rays.iter().map(|r| shift(r)).collect(),
                lineality: lineality.iter().map(|l| shift(l)).collect(),
            },
        };
        PolyCone {
            n,
            source,
            canon_v: OnceLock::new(),
            canon_h: OnceLock::new(),
        }
    }

    /// Canonical JSON description; coefficients are decimal strings so
    /// that consumers never face integer-width surprises.
    pub fn to_json(&self) -> Value {
        let v = self.canonical_v();
        let h = self.canonical_h();
        json!({
            "n": self.n,
            "facets": forms_json(&h.facets),
            "equations": forms_json(&h.equations),
            "rays": vectors_json(&v.rays),
            "lineality": vectors_json(&v.lineality),
        })
    }

    fn effective_forms(&self) -> Vec<LinearForm> {
        match &self.source {
            Source::Forms(forms) => forms.clone(),
            Source::Generators { .. } => {
                let h = self.canonical_h();
                let mut forms = h.facets.clone();
                for e in &h.equations {
                    forms.push(e.clone());
                    forms.push(e.negated());
                }
                forms
            }
        }
    }

    fn effective_generators(&self) -> (Vec<Weight>, Vec<Weight>) {
        match &self.source {
            Source::Generators { rays, lineality } => (rays.clone(), lineality.clone()),
            Source::Forms(_) => {
                let v = self.canonical_v();
                (v.rays.clone(), v.lineality.clone())
            }
        }
    }
}

impl fmt::Debug for PolyCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.canonical_v();
        f.debug_struct("PolyCone")
            .field("n", &self.n)
            .field("rays", &v.rays)
            .field("lineality", &v.lineality)
            .finish()
    }
}

/// Pads a block-local vector with zeros into an ambient of size
/// `total`, placing it at `offset`.
pub fn embed_block(total: usize, offset: usize, v: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); total];
    out[offset..offset + v.len()].clone_from_slice(v);
    out
}

/// Direct product of cones over consecutive coordinate blocks, built on
/// the inequality side: every factor form is padded with zeros into its
/// block.  [`product_from_generators`] builds the same cone from the
/// other representation; the verification suites compare the two.
pub fn product_from_forms(factors: &[PolyCone]) -> PolyCone {
    assert!(!factors.is_empty(), "a product needs at least one factor");
    let total: usize = factors.iter().map(PolyCone::n).sum();
    let mut forms = Vec::new();
    let mut offset = 0;
    for c in factors {
        for f in c.effective_forms() {
            forms.push(LinearForm(embed_block(total, offset, &f.0)));
        }
        offset += c.n();
    }
    PolyCone::from_forms(total, forms).expect("embedded forms stay nonzero")
}

/// Direct product of cones over consecutive coordinate blocks, built on
/// the generator side: rays and lineality vectors of each factor are
/// padded with zeros into its block.
pub fn product_from_generators(factors: &[PolyCone]) -> PolyCone {
    assert!(!factors.is_empty(), "a product needs at least one factor");
    let total: usize = factors.iter().map(PolyCone::n).sum();
    let mut rays = Vec::new();
    let mut lineality = Vec::new();
    let mut offset = 0;
    for c in factors {
        let (r, l) = c.effective_generators();
        rays.extend(r.iter().map(|v| embed_block(total, offset, v)));
        lineality.extend(l.iter().map(|v| embed_block(total, offset, v)));
        offset += c.n();
    }
    PolyCone::from_generators(total, rays, lineality).expect("embedded vectors stay nonzero")
}

fn to_rat(w: &[BigInt]) -> Vec<BigRational> {
    w.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

fn vectors_json(vs: &[Weight]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| {
                Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
            })
            .collect(),
    )
}

fn forms_json(fs: &[LinearForm]) -> Value {
    Value::Array(
        fs.iter()
            .map(|f| {
                Value::Array(f.0.iter().map(|x| Value::String(x.to_string())).collect())
            })
            .collect(),
    )
}

/// Reduces raw extreme rays modulo the lineality lattice (clearing the
/// pivot coordinate of every lineality row), primitivizes, deduplicates
/// and sorts.  Together with the row-HNF lineality this is a complete
/// normal form: equal cones canonicalize to identical data.
fn canonicalize(n: usize, raw: dd::RawCone) -> VRep {
    let lineality = raw.lineality;
    let pivots: Vec<usize> = lineality
        .iter()
        .map(|l| {
            l.iter()
                .position(|x| !x.is_zero())
                .expect("lineality basis rows are nonzero")
        })
        .collect();
    let mut rays: Vec<Weight> = Vec::with_capacity(raw.rays.len());
    for mut r in raw.rays {
        for (l, &pc) in lineality.iter().zip(&pivots) {
            if r[pc].is_zero() {
                continue;
            }
            // r := l[pc] * r - r[pc] * l scales the ray class by the
            // positive pivot and clears coordinate pc; echelon order
            // keeps previously cleared pivots at zero.
            let rc = r[pc].clone();
            let lp = l[pc].clone();
            for c in 0..n {
                let t = &lp * &r[c] - &rc * &l[c];
                r[c] = t;
            }
            linalg::primitive_in_place(&mut r);
        }
        // An extreme ray cannot lie in the lineality space; the guard
        // only protects against impossible states upstream.
        if !linalg::is_zero_vec(&r) {
            rays.push(r);
        }
    }
    rays.sort();
    rays.dedup();
    VRep { rays, lineality }
}
