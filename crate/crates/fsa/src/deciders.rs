//! The seven functional-property deciders.
//!
//! Every property is decided by two independent routes: a subspace rank
//! oracle over Kalman matrices, and an eigenvalue/Jordan-chain PBH test.
//! The two must always agree; a disagreement is an implementation bug, not
//! a valid system state.

use num_complex::Complex64;

use crate::numeric;
use crate::ratlin::{nullspace, RationalMatrix, Subspace};
use crate::spectra::{
    self, chains::OperatorTag, eigenvalues, first_visible_index, jordan_chains, Eigenvalue,
};
use crate::DecideError;

/// The seven decidable properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Fc,
    Fs,
    Ifc,
    Ifs,
    Fo,
    Fd,
    Toc,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Fc,
        Property::Fs,
        Property::Ifc,
        Property::Ifs,
        Property::Fo,
        Property::Fd,
        Property::Toc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Property::Fc => "fc",
            Property::Fs => "fs",
            Property::Ifc => "ifc",
            Property::Ifs => "ifs",
            Property::Fo => "fo",
            Property::Fd => "fd",
            Property::Toc => "toc",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.iter().copied().find(|p| p.as_str() == s)
    }

    /// FO and FD read (A, C, F); the rest read (A, B, F).
    pub fn needs_c(&self) -> bool {
        matches!(self, Property::Fo | Property::Fd)
    }
}

/// Which computational route produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionPath {
    SubspaceOracle,
    PbhChain,
}

/// The system quadruple (A, B, C, F). B and C are optional; each property
/// states which matrices it needs.
#[derive(Clone, Debug)]
pub struct SystemQuadruple {
    pub a: RationalMatrix,
    pub b: Option<RationalMatrix>,
    pub c: Option<RationalMatrix>,
    pub f: RationalMatrix,
}

impl SystemQuadruple {
    pub fn new(
        a: RationalMatrix,
        b: Option<RationalMatrix>,
        c: Option<RationalMatrix>,
        f: RationalMatrix,
    ) -> Result<Self, DecideError> {
        if !a.is_square() {
            return Err(crate::RatlinError::ShapeMismatch {
                what: "A must be square".into(),
            }
            .into());
        }
        let n = a.rows();
        if f.cols() != n {
            return Err(crate::RatlinError::ShapeMismatch {
                what: format!("F must have {n} columns"),
            }
            .into());
        }
        if f.rank() != f.rows() {
            return Err(DecideError::FNotFullRowRank);
        }
        if let Some(b) = &b {
            if b.rows() != n {
                return Err(crate::RatlinError::ShapeMismatch {
                    what: format!("B must have {n} rows"),
                }
                .into());
            }
        }
        if let Some(c) = &c {
            if c.cols() != n {
                return Err(crate::RatlinError::ShapeMismatch {
                    what: format!("C must have {n} columns"),
                }
                .into());
            }
        }
        Ok(SystemQuadruple { a, b, c, f })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn b(&self) -> Result<&RationalMatrix, DecideError> {
        self.b.as_ref().ok_or(DecideError::MissingMatrix { which: "B" })
    }

    pub fn c(&self) -> Result<&RationalMatrix, DecideError> {
        self.c.as_ref().ok_or(DecideError::MissingMatrix { which: "C" })
    }
}

/// Tolerances for the numeric fallback. Ignored on fully exact inputs.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Relative singular-value threshold for numeric rank decisions.
    pub eps_rel: f64,
    /// Numeric stability boundary: Re(λ) ≥ -stab_tol counts as unstable.
    pub stab_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_rel: numeric::DEFAULT_EPS_REL,
            stab_tol: 0.0,
        }
    }
}

/// A witness vector attached to a certificate.
#[derive(Clone, Debug)]
pub enum Witness {
    Exact(RationalMatrix),
    Numeric(Vec<Complex64>),
}

/// One entry in the evidence trail. Failure certificates carry the
/// eigenvalue, chain, index and witness vector that reproduce the
/// violation; successful chains record vacuous or checked notes.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub eigenvalue: Option<Eigenvalue>,
    pub chain_id: usize,
    /// 1-based chain index of the witness vector (0 when not applicable).
    pub index: usize,
    pub witness: Option<Witness>,
    pub relation: String,
    pub vacuous: bool,
}

/// One rank identity checked on the way to a verdict.
#[derive(Clone, Debug)]
pub struct RankCheck {
    pub description: String,
    pub lhs: usize,
    pub rhs: usize,
}

/// The outcome of deciding one property along one path.
#[derive(Clone, Debug)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub path: DecisionPath,
    pub certificates: Vec<Certificate>,
    pub ranks_checked: Vec<RankCheck>,
}

impl PropertyVerdict {
    fn new(property: Property, path: DecisionPath) -> Self {
        PropertyVerdict {
            property,
            holds: true,
            path,
            certificates: Vec::new(),
            ranks_checked: Vec::new(),
        }
    }

    pub fn failure_certificates(&self) -> Vec<Certificate> {
        self.certificates
            .iter()
            .filter(|c| !c.vacuous)
            .cloned()
            .collect()
    }
}

/// Extra per-level output requested via the diagnostics flag.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Record the sequential per-level rank tests, not just the single-step
    /// terminal one.
    pub diagnostics: bool,
}

/// Decides `property` along the requested path.
pub fn test_property(
    sys: &SystemQuadruple,
    property: Property,
    path: DecisionPath,
    tol: &Tolerances,
    opts: &Options,
) -> Result<PropertyVerdict, DecideError> {
    match path {
        DecisionPath::SubspaceOracle => oracle_verdict(sys, property, tol),
        DecisionPath::PbhChain => chain_verdict(sys, property, tol, opts),
    }
}

/// Runs both paths and checks they agree; returns (oracle, chain).
pub fn decide_both(
    sys: &SystemQuadruple,
    property: Property,
    tol: &Tolerances,
    opts: &Options,
) -> Result<(PropertyVerdict, PropertyVerdict), DecideError> {
    let oracle = oracle_verdict(sys, property, tol)?;
    let chain = chain_verdict(sys, property, tol, opts)?;
    if oracle.holds != chain.holds {
        return Err(DecideError::InconsistencyDetected {
            property: property.as_str().to_string(),
        });
    }
    Ok((oracle, chain))
}

pub fn test_fc(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Fc, path, &Tolerances::default(), &Options::default())
}

pub fn test_fs(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Fs, path, &Tolerances::default(), &Options::default())
}

pub fn test_ifc(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Ifc, path, &Tolerances::default(), &Options::default())
}

pub fn test_ifs(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Ifs, path, &Tolerances::default(), &Options::default())
}

pub fn test_fo(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Fo, path, &Tolerances::default(), &Options::default())
}

pub fn test_fd(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Fd, path, &Tolerances::default(), &Options::default())
}

pub fn test_toc(sys: &SystemQuadruple, path: DecisionPath) -> Result<PropertyVerdict, DecideError> {
    test_property(sys, Property::Toc, path, &Tolerances::default(), &Options::default())
}

// ---------------------------------------------------------------------------
// Subspace oracle path
// ---------------------------------------------------------------------------

fn oracle_verdict(
    sys: &SystemQuadruple,
    property: Property,
    tol: &Tolerances,
) -> Result<PropertyVerdict, DecideError> {
    let mut v = PropertyVerdict::new(property, DecisionPath::SubspaceOracle);
    match property {
        Property::Fc => {
            let ctrb = RationalMatrix::controllability_matrix(&sys.a, sys.b()?)?;
            let lhs = ctrb.hstack(&sys.f.transpose()).rank();
            let rhs = ctrb.rank();
            push_rank(&mut v, "rank([C_(A,B) | Fᵀ]) = rank(C_(A,B))", lhs, rhs);
            if lhs != rhs {
                v.holds = false;
                push_kernel_witness(
                    &mut v,
                    &nullspace(&ctrb.transpose()),
                    &sys.f,
                    "v ∈ ker(C_(A,B)ᵀ) with Fv ≠ 0",
                );
            }
        }
        Property::Fs => {
            let ctrb = RationalMatrix::controllability_matrix(&sys.a, sys.b()?)?;
            let at = sys.a.transpose();
            let unc = nullspace(&ctrb.transpose());
            let x_plus = spectra::unstable_eigenspace(&at, tol.stab_tol)?;
            let unstable_unc = unc.intersect(&x_plus)?;
            let kf = nullspace(&sys.f);
            let holds = kf.contains(&unstable_unc)?;
            push_rank(
                &mut v,
                "ker(C_(A,B)ᵀ) ∩ X₊ ⊆ ker(F)",
                kf.sum(&unstable_unc)?.dim(),
                kf.dim(),
            );
            if !holds {
                v.holds = false;
                push_kernel_witness(
                    &mut v,
                    &unstable_unc,
                    &sys.f,
                    "unstable v ∈ ker(C_(A,B)ᵀ) with Fv ≠ 0",
                );
            }
        }
        Property::Ifc => {
            let ctrb = RationalMatrix::controllability_matrix(&sys.a, sys.b()?)?;
            let vf_mat =
                RationalMatrix::controllability_matrix(&sys.a.transpose(), &sys.f.transpose())?;
            let lhs = ctrb.hstack(&vf_mat).rank();
            let rhs = ctrb.rank();
            push_rank(
                &mut v,
                "rank([C_(A,B) | C_(Aᵀ,Fᵀ)]) = rank(C_(A,B))",
                lhs,
                rhs,
            );
            if lhs != rhs {
                v.holds = false;
                // A direction of V_F outside Im(C_(A,B)).
                let unc = nullspace(&ctrb.transpose());
                push_kernel_witness(
                    &mut v,
                    &unc,
                    &vf_mat.transpose(),
                    "v ∈ ker(C_(A,B)ᵀ) not orthogonal to V_F",
                );
            }
        }
        Property::Ifs => {
            // Two alternative sufficient-and-together-complete routes:
            // the intrinsic route (shifted functionals annihilate every
            // unstable uncontrollable direction) or the whole-chain route
            // (F annihilates every unstable chain whose bottom eigenvector
            // is uncontrollable). Either one certifies IFS.
            let ctrb = RationalMatrix::controllability_matrix(&sys.a, sys.b()?)?;
            let at = sys.a.transpose();
            let x_plus = spectra::unstable_eigenspace(&at, tol.stab_tol)?;
            let unc = nullspace(&ctrb.transpose());
            let unstable_unc = unc.intersect(&x_plus)?;
            let of = RationalMatrix::observability_matrix(&sys.a, &sys.f)?;
            let intrinsic = nullspace(&of).contains(&unstable_unc)?;
            push_rank(
                &mut v,
                "O_(A,F)·(ker(C_(A,B)ᵀ) ∩ X₊) = 0",
                nullspace(&of).sum(&unstable_unc)?.dim(),
                nullspace(&of).dim(),
            );
            let bottoms = ifs_uncontrollable_chain_span(sys, tol)?;
            let whole_chain = match &bottoms {
                Some(span) => nullspace(&sys.f).contains(span)?,
                None => false,
            };
            if let Some(span) = &bottoms {
                push_rank(
                    &mut v,
                    "F annihilates unstable uncontrollable-bottom chains",
                    nullspace(&sys.f).sum(span)?.dim(),
                    nullspace(&sys.f).dim(),
                );
            }
            if !(intrinsic || whole_chain) {
                v.holds = false;
                push_kernel_witness(
                    &mut v,
                    &unstable_unc,
                    &of,
                    "unstable uncontrollable direction with O_(A,F)·v ≠ 0",
                );
            }
        }
        Property::Fo => {
            let oc = RationalMatrix::observability_matrix(&sys.a, sys.c()?)?;
            let of = RationalMatrix::observability_matrix(&sys.a, &sys.f)?;
            let lhs = oc.vstack(&of).rank();
            let rhs = oc.rank();
            push_rank(&mut v, "rank([O_(A,C); O_(A,F)]) = rank(O_(A,C))", lhs, rhs);
            if lhs != rhs {
                v.holds = false;
                push_kernel_witness(
                    &mut v,
                    &nullspace(&oc),
                    &of,
                    "x ∈ ker(O_(A,C)) with O_(A,F)·x ≠ 0",
                );
            }
        }
        Property::Fd => {
            let oc = RationalMatrix::observability_matrix(&sys.a, sys.c()?)?;
            let of = RationalMatrix::observability_matrix(&sys.a, &sys.f)?;
            let x_plus = spectra::unstable_eigenspace(&sys.a, tol.stab_tol)?;
            let target = nullspace(&oc).intersect(&x_plus)?;
            let kf = nullspace(&of);
            let holds = kf.contains(&target)?;
            push_rank(
                &mut v,
                "ker(O_(A,C)) ∩ X₊ ⊆ ker(O_(A,F))",
                kf.sum(&target)?.dim(),
                kf.dim(),
            );
            if !holds {
                v.holds = false;
                push_kernel_witness(
                    &mut v,
                    &target,
                    &of,
                    "unstable x ∈ ker(O_(A,C)) with O_(A,F)·x ≠ 0",
                );
            }
        }
        Property::Toc => {
            let ctrb = RationalMatrix::controllability_matrix(&sys.a, sys.b()?)?;
            let lhs = sys.f.mul(&ctrb).rank();
            let rhs = sys.f.rank();
            push_rank(&mut v, "rank(F·C_(A,B)) = rank(F)", lhs, rhs);
            if lhs != rhs {
                v.holds = false;
                // Nonzero y with yᵀF inside the uncontrollable row space.
                let ker = sys.f.mul(&ctrb).transpose().nullspace_basis();
                v.certificates.push(Certificate {
                    eigenvalue: None,
                    chain_id: 0,
                    index: 0,
                    witness: (!ker.is_empty()).then(|| Witness::Exact(ker.column(0))),
                    relation: "nonzero y with (F·C_(A,B))ᵀ y = 0".to_string(),
                    vacuous: false,
                });
            }
        }
    }
    Ok(v)
}

fn push_rank(v: &mut PropertyVerdict, desc: &str, lhs: usize, rhs: usize) {
    v.ranks_checked.push(RankCheck {
        description: desc.to_string(),
        lhs,
        rhs,
    });
}

/// Scans the basis of `space` for a column that `detector` detects and
/// records it as a failure witness.
fn push_kernel_witness(
    v: &mut PropertyVerdict,
    space: &Subspace,
    detector: &RationalMatrix,
    relation: &str,
) {
    let basis = space.basis();
    for c in 0..basis.cols() {
        let col = basis.column(c);
        if !detector.mul(&col).is_zero() {
            v.certificates.push(Certificate {
                eigenvalue: None,
                chain_id: 0,
                index: 0,
                witness: Some(Witness::Exact(col)),
                relation: relation.to_string(),
                vacuous: false,
            });
            return;
        }
    }
    v.certificates.push(Certificate {
        eigenvalue: None,
        chain_id: 0,
        index: 0,
        witness: None,
        relation: relation.to_string(),
        vacuous: false,
    });
}

// ---------------------------------------------------------------------------
// PBH / Jordan-chain path
// ---------------------------------------------------------------------------

/// Which side of the duality a chain test works on.
enum Side {
    /// Chains of Aᵀ probed by Bᵀ (controllability-flavoured properties).
    Control,
    /// Chains of A probed by C (observability-flavoured properties).
    Observe,
}

fn chain_verdict(
    sys: &SystemQuadruple,
    property: Property,
    tol: &Tolerances,
    opts: &Options,
) -> Result<PropertyVerdict, DecideError> {
    let mut v = PropertyVerdict::new(property, DecisionPath::PbhChain);
    match property {
        Property::Ifs => {
            chain_verdict_ifs(sys, tol, &mut v)?;
            return Ok(v);
        }
        Property::Toc => {
            chain_verdict_toc(sys, tol, &mut v)?;
            return Ok(v);
        }
        _ => {}
    }
    let (side, unstable_only, intrinsic) = match property {
        Property::Fc => (Side::Control, false, false),
        Property::Fs => (Side::Control, true, false),
        Property::Ifc => (Side::Control, false, true),
        Property::Fo => (Side::Observe, false, false),
        Property::Fd => (Side::Observe, true, false),
        Property::Ifs | Property::Toc => unreachable!(),
    };

    let (operator, probe, tag) = match side {
        Side::Control => (
            sys.a.transpose(),
            sys.b()?.transpose(),
            OperatorTag::OfATranspose,
        ),
        Side::Observe => (sys.a.clone(), sys.c()?.clone(), OperatorTag::OfA),
    };
    // Intrinsic tests require the whole shifted family F, FA, ..., FA^{n-1}
    // to annihilate the invisible directions; plain tests require F alone.
    let detector = if intrinsic {
        RationalMatrix::observability_matrix(&sys.a, &sys.f)?
    } else {
        sys.f.clone()
    };

    for ev in eigenvalues(&sys.a) {
        if unstable_only && !ev.is_unstable(tol.stab_tol) {
            v.certificates.push(Certificate {
                eigenvalue: Some(ev.clone()),
                chain_id: 0,
                index: 0,
                witness: None,
                relation: "stable eigenvalue: out of scope for this property".into(),
                vacuous: true,
            });
            continue;
        }
        if ev.is_exact() {
            exact_invisibility_tests(&operator, &probe, &detector, tag, &ev, opts, &mut v)?;
        } else {
            numeric_invisibility_tests(&operator, &probe, &detector, &ev, tol, &mut v);
        }
    }
    Ok(v)
}

/// [N^k; probe; probe·N; ...; probe·N^{k-1}] whose kernel is the set of
/// depth-≤k vectors whose generated chain is invisible to the probe.
fn invisibility_stack(
    shifted: &RationalMatrix,
    probe: &RationalMatrix,
    k: usize,
) -> RationalMatrix {
    let mut stack = shifted.pow(k);
    let mut p = probe.clone();
    for _ in 0..k {
        stack = stack.vstack(&p);
        p = p.mul(shifted);
    }
    stack
}

fn fmt_eig(ev: &Eigenvalue) -> String {
    match &ev.value {
        spectra::EigenvalueValue::Exact(r) => r.to_string(),
        spectra::EigenvalueValue::Numeric(z) => format!("{}+{}i", z.re, z.im),
    }
}

/// Per-eigenvalue level tests: at each filtration level k the invisible
/// subspace ker([N^k; probe; ...; probe·N^{k-1}]) must be annihilated by
/// the detector. Basis-free, so linear combinations across chains cannot
/// hide a violation.
fn exact_invisibility_tests(
    operator: &RationalMatrix,
    probe: &RationalMatrix,
    detector: &RationalMatrix,
    tag: OperatorTag,
    ev: &Eigenvalue,
    opts: &Options,
    v: &mut PropertyVerdict,
) -> Result<(), DecideError> {
    let lam = ev.exact_value().unwrap();
    let shifted = spectra::shifted_matrix(operator, lam);

    // Chain construction feeds the per-chain visibility notes; the verdict
    // itself comes from the basis-free level tests below.
    let chains = jordan_chains(operator, ev, tag)?;
    let s = chains.iter().map(|c| c.len()).max().unwrap_or(0);
    for (chain_id, chain) in chains.iter().enumerate() {
        let vis = first_visible_index(chain, probe);
        v.certificates.push(Certificate {
            eigenvalue: Some(ev.clone()),
            chain_id,
            index: vis.j,
            witness: None,
            relation: if vis.j == 1 {
                format!("first visible index j = 1 at λ = {}: vacuous", fmt_eig(ev))
            } else {
                format!(
                    "first visible index j = {} at λ = {} (chain length {})",
                    vis.j,
                    fmt_eig(ev),
                    chain.len()
                )
            },
            vacuous: true,
        });
    }

    let mut reported_failure = false;
    for k in 1..=s {
        let m_k = invisibility_stack(&shifted, probe, k);
        let rhs = m_k.rank();
        let lhs = m_k.vstack(detector).rank();
        if opts.diagnostics || k == s || lhs != rhs {
            v.ranks_checked.push(RankCheck {
                description: format!("invisible level {k} at λ = {}", fmt_eig(ev)),
                lhs,
                rhs,
            });
        }
        if lhs != rhs && !reported_failure {
            v.holds = false;
            reported_failure = true;
            let kernel = nullspace(&m_k);
            let basis = kernel.basis();
            for c in 0..basis.cols() {
                let w = basis.column(c);
                if !detector.mul(&w).is_zero() {
                    v.certificates.push(Certificate {
                        eigenvalue: Some(ev.clone()),
                        chain_id: 0,
                        index: k,
                        witness: Some(Witness::Exact(w)),
                        relation: format!(
                            "chain generated by w is invisible through level {k} but F detects it"
                        ),
                        vacuous: false,
                    });
                    break;
                }
            }
        }
    }
    Ok(())
}

fn cpow(m: &numeric::CMatrix, k: usize) -> numeric::CMatrix {
    let n = m.nrows();
    let mut acc = nalgebra::DMatrix::identity(n, n);
    for _ in 0..k {
        acc = &acc * m;
    }
    acc
}

fn numeric_invisibility_stack(
    shifted: &numeric::CMatrix,
    probe: &numeric::CMatrix,
    k: usize,
) -> numeric::CMatrix {
    let mut stack = cpow(shifted, k);
    let mut p = probe.clone();
    for _ in 0..k {
        stack = numeric::vstack(&stack, &p);
        p = &p * shifted;
    }
    stack
}

/// Numeric mirror of `exact_invisibility_tests` for irrational eigenvalues.
fn numeric_invisibility_tests(
    operator: &RationalMatrix,
    probe: &RationalMatrix,
    detector: &RationalMatrix,
    ev: &Eigenvalue,
    tol: &Tolerances,
    v: &mut PropertyVerdict,
) {
    let op = numeric::to_cmatrix(operator);
    let probe_c = numeric::to_cmatrix(probe);
    let det_c = numeric::to_cmatrix(detector);
    let lam = ev.approx();
    let shifted = numeric::shifted(&op, lam);
    let chains = numeric::jordan_chains(&op, lam, ev.alg_mult, tol.eps_rel);
    let s = chains.iter().map(|c| c.ncols()).max().unwrap_or(0);
    for (chain_id, chain) in chains.iter().enumerate() {
        let (j, _) = numeric::first_visible_index(chain, &probe_c, tol.eps_rel);
        v.certificates.push(Certificate {
            eigenvalue: Some(ev.clone()),
            chain_id,
            index: j,
            witness: None,
            relation: format!("numeric first visible index j = {j} at λ = {}", fmt_eig(ev)),
            vacuous: true,
        });
    }
    for k in 1..=s {
        let m_k = numeric_invisibility_stack(&shifted, &probe_c, k);
        let rhs = numeric::rank(&m_k, tol.eps_rel);
        let lhs = numeric::rank(&numeric::vstack(&m_k, &det_c), tol.eps_rel);
        v.ranks_checked.push(RankCheck {
            description: format!("numeric invisible level {k} at λ = {}", fmt_eig(ev)),
            lhs,
            rhs,
        });
        if lhs != rhs {
            v.holds = false;
            let kernel = numeric::nullspace(&m_k, tol.eps_rel);
            let mut witness = None;
            for c in 0..kernel.ncols() {
                let w = kernel.column(c).into_owned();
                let image = &det_c * &w;
                if image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
                    > tol.eps_rel.sqrt()
                {
                    witness = Some(Witness::Numeric(w.iter().copied().collect()));
                    break;
                }
            }
            v.certificates.push(Certificate {
                eigenvalue: Some(ev.clone()),
                chain_id: 0,
                index: k,
                witness,
                relation: "numeric: invisible chain detected by F".into(),
                vacuous: false,
            });
            return;
        }
    }
}

/// IFS chain path. Holds when either the intrinsic route (shifted
/// functionals annihilate every unstable uncontrollable direction) or the
/// whole-chain route (F annihilates every unstable chain whose bottom is
/// uncontrollable) succeeds.
fn chain_verdict_ifs(
    sys: &SystemQuadruple,
    tol: &Tolerances,
    v: &mut PropertyVerdict,
) -> Result<(), DecideError> {
    let at = sys.a.transpose();
    let bt = sys.b()?.transpose();
    let of = RationalMatrix::observability_matrix(&sys.a, &sys.f)?;

    let mut intrinsic = true;
    let mut whole_chain = true;
    let mut intrinsic_cert: Option<Certificate> = None;
    let mut chain_cert: Option<Certificate> = None;

    for ev in eigenvalues(&sys.a) {
        if !ev.is_unstable(tol.stab_tol) {
            v.certificates.push(Certificate {
                eigenvalue: Some(ev.clone()),
                chain_id: 0,
                index: 0,
                witness: None,
                relation: "stable eigenvalue: out of scope for this property".into(),
                vacuous: true,
            });
            continue;
        }
        if ev.is_exact() {
            let lam = ev.exact_value().unwrap();
            let shifted = spectra::shifted_matrix(&at, lam);
            let s = filtration_index(&shifted);

            // Intrinsic route at this eigenvalue.
            let m_s = invisibility_stack(&shifted, &bt, s);
            let rhs = m_s.rank();
            let lhs = m_s.vstack(&of).rank();
            v.ranks_checked.push(RankCheck {
                description: format!("intrinsic route at λ = {}", fmt_eig(&ev)),
                lhs,
                rhs,
            });
            if lhs != rhs {
                intrinsic = false;
                if intrinsic_cert.is_none() {
                    let basis = nullspace(&m_s);
                    let basis = basis.basis();
                    for c in 0..basis.cols() {
                        let w = basis.column(c);
                        if !of.mul(&w).is_zero() {
                            intrinsic_cert = Some(Certificate {
                                eigenvalue: Some(ev.clone()),
                                chain_id: 0,
                                index: s,
                                witness: Some(Witness::Exact(w)),
                                relation:
                                    "unstable uncontrollable direction detected by a shifted functional"
                                        .into(),
                                vacuous: false,
                            });
                            break;
                        }
                    }
                }
            }

            // Whole-chain route: every level q with a genuine
            // uncontrollable-bottom chain must be annihilated by F.
            for q in 1..=s {
                let gq = shifted.pow(q).vstack(&bt.mul(&shifted.pow(q - 1)));
                let dim_gq = sys.n() - gq.rank();
                let dim_lower = sys.n() - shifted.pow(q - 1).rank();
                if dim_gq <= dim_lower {
                    continue;
                }
                let rhs = gq.rank();
                let lhs = gq.vstack(&sys.f).rank();
                v.ranks_checked.push(RankCheck {
                    description: format!(
                        "whole-chain route, length {q} at λ = {}",
                        fmt_eig(&ev)
                    ),
                    lhs,
                    rhs,
                });
                if lhs != rhs {
                    whole_chain = false;
                    if chain_cert.is_none() {
                        let basis = nullspace(&gq);
                        let basis = basis.basis();
                        for c in 0..basis.cols() {
                            let w = basis.column(c);
                            if !sys.f.mul(&w).is_zero() {
                                chain_cert = Some(Certificate {
                                    eigenvalue: Some(ev.clone()),
                                    chain_id: 0,
                                    index: q,
                                    witness: Some(Witness::Exact(w)),
                                    relation:
                                        "chain with uncontrollable bottom eigenvector detected by F"
                                            .into(),
                                    vacuous: false,
                                });
                                break;
                            }
                        }
                    }
                }
            }
        } else {
            // Numeric unstable eigenvalue: run both routes in complex
            // floating point.
            let (i_ok, w_ok) = ifs_numeric_routes(sys, &ev, tol)?;
            if !i_ok {
                intrinsic = false;
            }
            if !w_ok {
                whole_chain = false;
            }
            if !(i_ok || w_ok) && chain_cert.is_none() {
                chain_cert = Some(Certificate {
                    eigenvalue: Some(ev.clone()),
                    chain_id: 0,
                    index: 0,
                    witness: None,
                    relation: "numeric: unstable uncontrollable chain detected by F".into(),
                    vacuous: false,
                });
            }
        }
    }

    if !(intrinsic || whole_chain) {
        v.holds = false;
        if let Some(c) = intrinsic_cert {
            v.certificates.push(c);
        }
        if let Some(c) = chain_cert {
            v.certificates.push(c);
        }
    }
    Ok(())
}

/// Smallest s with ker(N^s) = ker(N^{s+1}).
fn filtration_index(shifted: &RationalMatrix) -> usize {
    let n = shifted.rows();
    let mut prev = shifted.rank();
    let mut power = shifted.clone();
    for s in 1..=n {
        if n - prev == 0 && s == 1 && shifted.rank() == n {
            return 0;
        }
        let next = power.mul(shifted);
        let next_rank = next.rank();
        if next_rank == prev {
            return s;
        }
        prev = next_rank;
        power = next;
    }
    n
}

/// Numeric IFS routes for one irrational unstable eigenvalue:
/// (intrinsic route ok, whole-chain route ok).
pub(crate) fn ifs_numeric_routes(
    sys: &SystemQuadruple,
    ev: &Eigenvalue,
    tol: &Tolerances,
) -> Result<(bool, bool), DecideError> {
    let at = numeric::to_cmatrix(&sys.a.transpose());
    let bt = numeric::to_cmatrix(&sys.b()?.transpose());
    let of = numeric::to_cmatrix(&RationalMatrix::observability_matrix(&sys.a, &sys.f)?);
    let f_c = numeric::to_cmatrix(&sys.f);
    let shifted = numeric::shifted(&at, ev.approx());
    let n = sys.n();

    let mut s = 0;
    let mut prev = numeric::rank(&shifted, tol.eps_rel);
    let mut power = shifted.clone();
    for step in 1..=n {
        let next = &power * &shifted;
        let r = numeric::rank(&next, tol.eps_rel);
        if r == prev {
            s = step;
            break;
        }
        prev = r;
        power = next;
        s = step + 1;
    }

    let m_s = numeric_invisibility_stack(&shifted, &bt, s);
    let intrinsic = numeric::rank(&numeric::vstack(&m_s, &of), tol.eps_rel)
        == numeric::rank(&m_s, tol.eps_rel);

    let mut whole_chain = true;
    for q in 1..=s {
        let nq = cpow(&shifted, q);
        let gq = numeric::vstack(&nq, &(&bt * &cpow(&shifted, q - 1)));
        let dim_gq = n - numeric::rank(&gq, tol.eps_rel);
        let dim_lower = n - numeric::rank(&cpow(&shifted, q - 1), tol.eps_rel);
        if dim_gq <= dim_lower {
            continue;
        }
        if numeric::rank(&numeric::vstack(&gq, &f_c), tol.eps_rel)
            != numeric::rank(&gq, tol.eps_rel)
        {
            whole_chain = false;
        }
    }
    Ok((intrinsic, whole_chain))
}

/// Oracle-side span of the whole-chain IFS route: for each exact unstable
/// eigenvalue, the sum of the kernels ker([N^q; Bᵀ N^{q-1}]) over levels q
/// that contain a genuine uncontrollable-bottom chain. Returns None when a
/// numeric unstable eigenvalue fails its numeric whole-chain check.
fn ifs_uncontrollable_chain_span(
    sys: &SystemQuadruple,
    tol: &Tolerances,
) -> Result<Option<Subspace>, DecideError> {
    let at = sys.a.transpose();
    let bt = sys.b()?.transpose();
    let n = sys.n();
    let mut span = Subspace::zero(n);
    for ev in eigenvalues(&sys.a) {
        if !ev.is_unstable(tol.stab_tol) {
            continue;
        }
        if ev.is_exact() {
            let shifted = spectra::shifted_matrix(&at, ev.exact_value().unwrap());
            let s = filtration_index(&shifted);
            for q in 1..=s {
                let gq_kernel = nullspace(&shifted.pow(q).vstack(&bt.mul(&shifted.pow(q - 1))));
                let lower = nullspace(&shifted.pow(q - 1));
                if gq_kernel.dim() > lower.dim() {
                    span = span.sum(&gq_kernel)?;
                }
            }
        } else {
            let (_, w_ok) = ifs_numeric_routes(sys, &ev, tol)?;
            if !w_ok {
                return Ok(None);
            }
        }
    }
    Ok(Some(span))
}

/// TOC chain path: per eigenvalue, Im(Fᵀ) must intersect the invisible
/// (uncontrollable) subspace trivially; the verdict also checks the
/// aggregate across all exact eigenvalues.
fn chain_verdict_toc(
    sys: &SystemQuadruple,
    tol: &Tolerances,
    v: &mut PropertyVerdict,
) -> Result<(), DecideError> {
    let at = sys.a.transpose();
    let bt = sys.b()?.transpose();
    let r = sys.f.rows();
    let ft = sys.f.transpose();
    let mut aggregate = Subspace::zero(sys.n());
    for ev in eigenvalues(&sys.a) {
        if ev.is_exact() {
            let shifted = spectra::shifted_matrix(&at, ev.exact_value().unwrap());
            let s = filtration_index(&shifted);
            let m_s = invisibility_stack(&shifted, &bt, s);
            let invisible = nullspace(&m_s);
            aggregate = aggregate.sum(&invisible)?;
            if invisible.dim() == 0 {
                v.certificates.push(Certificate {
                    eigenvalue: Some(ev.clone()),
                    chain_id: 0,
                    index: 0,
                    witness: None,
                    relation: format!(
                        "no uncontrollable directions at λ = {}: vacuous",
                        fmt_eig(&ev)
                    ),
                    vacuous: true,
                });
                continue;
            }
            let stacked = ft.hstack(invisible.basis());
            let lhs = stacked.rank();
            let rhs = r + invisible.dim();
            v.ranks_checked.push(RankCheck {
                description: format!(
                    "rank([Fᵀ | V_inv]) = r + dim at λ = {}",
                    fmt_eig(&ev)
                ),
                lhs,
                rhs,
            });
        } else {
            let op = numeric::to_cmatrix(&at);
            let bt_c = numeric::to_cmatrix(&bt);
            let ft_c = numeric::to_cmatrix(&ft);
            let shifted = numeric::shifted(&op, ev.approx());
            let chains = numeric::jordan_chains(&op, ev.approx(), ev.alg_mult, tol.eps_rel);
            let s = chains.iter().map(|c| c.ncols()).max().unwrap_or(0);
            let m_s = numeric_invisibility_stack(&shifted, &bt_c, s);
            let invisible = numeric::nullspace(&m_s, tol.eps_rel);
            if invisible.ncols() == 0 {
                continue;
            }
            let stacked = numeric::hstack(&ft_c, &invisible);
            let lhs = numeric::rank(&stacked, tol.eps_rel);
            let rhs = r + invisible.ncols();
            v.ranks_checked.push(RankCheck {
                description: format!("numeric rank([Fᵀ | V_inv]) at λ = {}", fmt_eig(&ev)),
                lhs,
                rhs,
            });
            if lhs != rhs {
                v.holds = false;
                v.certificates.push(Certificate {
                    eigenvalue: Some(ev.clone()),
                    chain_id: 0,
                    index: 0,
                    witness: None,
                    relation: "numeric: Im(Fᵀ) meets the uncontrollable subspace".into(),
                    vacuous: false,
                });
            }
        }
    }
    // Aggregate across eigenvalues: a functional direction may hide inside
    // a combination of uncontrollable directions from different λ.
    let stacked = ft.hstack(aggregate.basis());
    let lhs = stacked.rank();
    let rhs = r + aggregate.dim();
    v.ranks_checked.push(RankCheck {
        description: "rank([Fᵀ | V_inv(all λ)]) = r + dim".into(),
        lhs,
        rhs,
    });
    if lhs != rhs {
        v.holds = false;
        let shared = crate::ratlin::column_space(&ft).intersect(&aggregate)?;
        v.certificates.push(Certificate {
            eigenvalue: None,
            chain_id: 0,
            index: 0,
            witness: (!shared.is_zero()).then(|| Witness::Exact(shared.basis().column(0))),
            relation: "Im(Fᵀ) meets the uncontrollable subspace".into(),
            vacuous: false,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Derived checks
// ---------------------------------------------------------------------------

/// The all-shifts characterization of IFC: FC must hold for every shifted
/// functional F·A^k, k = 0..n-1.
pub fn ifc_all_shifts(sys: &SystemQuadruple, tol: &Tolerances) -> Result<bool, DecideError> {
    let n = sys.n();
    let mut fk = sys.f.clone();
    for _ in 0..n.max(1) {
        // A shifted functional can lose row rank; FC only reads ker(F),
        // so test with a full-row-rank row basis of F·A^k.
        let basis = row_basis(&fk);
        if !basis.is_empty() {
            let shifted_sys = SystemQuadruple::new(
                sys.a.clone(),
                sys.b.clone(),
                sys.c.clone(),
                basis,
            )?;
            let verdict = oracle_verdict(&shifted_sys, Property::Fc, tol)?;
            if !verdict.holds {
                return Ok(false);
            }
        }
        fk = fk.mul(&sys.a);
    }
    Ok(true)
}

/// IFS implies stabilizability of every shifted functional F·A^k.
pub fn ifs_all_shifts(sys: &SystemQuadruple, tol: &Tolerances) -> Result<bool, DecideError> {
    let n = sys.n();
    let mut fk = sys.f.clone();
    for _ in 0..n.max(1) {
        let basis = row_basis(&fk);
        if !basis.is_empty() {
            let shifted_sys =
                SystemQuadruple::new(sys.a.clone(), sys.b.clone(), sys.c.clone(), basis)?;
            let verdict = oracle_verdict(&shifted_sys, Property::Fs, tol)?;
            if !verdict.holds {
                return Ok(false);
            }
        }
        fk = fk.mul(&sys.a);
    }
    Ok(true)
}

/// Full-row-rank matrix with the same row space, earliest rows kept.
pub fn row_basis(m: &RationalMatrix) -> RationalMatrix {
    let mut kept = RationalMatrix::zeros(0, m.cols());
    let mut rank = 0usize;
    for i in 0..m.rows() {
        let trial = kept.vstack(&m.row(i));
        if trial.rank() > rank {
            kept = trial;
            rank += 1;
        }
    }
    kept
}

/// All seven verdicts plus the implication-lattice consistency check.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    /// (property, holds) for all seven, both paths already cross-checked.
    pub verdicts: Vec<(Property, bool)>,
    /// Violated implications; any entry is a fatal implementation bug.
    pub violations: Vec<String>,
}

impl LatticeReport {
    pub fn get(&self, p: Property) -> bool {
        self.verdicts.iter().find(|(q, _)| *q == p).map(|(_, h)| *h).unwrap()
    }
}

/// Runs all seven properties (both paths, agreement enforced) and checks
/// IFC⇒FC, IFC⇒IFS, IFS⇒FS, FC⇒FS, FC⇒TOC, FO⇒FD.
pub fn implication_lattice(
    sys: &SystemQuadruple,
    tol: &Tolerances,
) -> Result<LatticeReport, DecideError> {
    let opts = Options::default();
    let mut verdicts = Vec::new();
    for p in Property::ALL {
        let (oracle, _) = decide_both(sys, p, tol, &opts)?;
        verdicts.push((p, oracle.holds));
    }
    let report = LatticeReport {
        verdicts,
        violations: Vec::new(),
    };
    let implications: [(Property, Property); 6] = [
        (Property::Ifc, Property::Fc),
        (Property::Ifc, Property::Ifs),
        (Property::Ifs, Property::Fs),
        (Property::Fc, Property::Fs),
        (Property::Fc, Property::Toc),
        (Property::Fo, Property::Fd),
    ];
    let mut violations = Vec::new();
    for (p, q) in implications {
        if report.get(p) && !report.get(q) {
            violations.push(format!("{} holds but {} fails", p.as_str(), q.as_str()));
        }
    }
    Ok(LatticeReport {
        violations,
        ..report
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::RationalMatrix;

    fn sys(
        a: &[&[i64]],
        b: Option<&[i64]>,
        c: Option<&[i64]>,
        f: &[i64],
    ) -> SystemQuadruple {
        SystemQuadruple::new(
            RationalMatrix::from_i64(a),
            b.map(RationalMatrix::col_from_i64),
            c.map(RationalMatrix::row_from_i64),
            RationalMatrix::row_from_i64(f),
        )
        .unwrap()
    }

    fn both(s: &SystemQuadruple, p: Property) -> bool {
        let (oracle, chain) =
            decide_both(s, p, &Tolerances::default(), &Options::default()).unwrap();
        assert_eq!(oracle.holds, chain.holds, "{:?} path disagreement", p);
        oracle.holds
    }

    fn example1() -> SystemQuadruple {
        sys(
            &[&[4, 0, -2, 7], &[1, 2, 0, 2], &[-1, 0, 4, -5], &[-1, 1, 1, -1]],
            Some(&[2, 1, -1, -1]),
            None,
            &[1, 2, 1, 2],
        )
    }

    fn example2() -> SystemQuadruple {
        sys(&[&[0, 1], &[0, 0]], Some(&[1, 0]), None, &[1, 0])
    }

    fn example3() -> SystemQuadruple {
        sys(
            &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]],
            Some(&[0, 1, 0, 0]),
            None,
            &[1, 0, 0, 0],
        )
    }

    fn example4() -> SystemQuadruple {
        sys(
            &[&[5, -50, 59, 64], &[2, -29, 32, 36], &[-4, 54, -66, -72], &[5, -67, 79, 87]],
            Some(&[-4, -2, 4, -5]),
            None,
            &[0, 1, 1, 0],
        )
    }

    fn example5() -> SystemQuadruple {
        sys(
            &[&[5, 0, 1, 4], &[1, 2, 0, 2], &[-2, 1, 2, -3], &[-1, 0, 0, 0]],
            None,
            Some(&[1, 2, 2, 0]),
            &[1, 2, 1, 2],
        )
    }

    fn example6() -> SystemQuadruple {
        sys(
            &[&[4, -4, 2, -5], &[1, 1, 1, -1], &[-1, 3, 1, 4], &[-1, 3, -1, 5]],
            Some(&[1, 0, 0, 0]),
            None,
            &[1, 3, 2, 1],
        )
    }

    #[test]
    fn fc_worked_examples() {
        assert!(both(&example1(), Property::Fc));
        assert!(both(&example2(), Property::Fc));
        assert!(!both(&example6(), Property::Fc));
    }

    #[test]
    fn fc_failure_has_certificate() {
        let v = test_fc(&example6(), DecisionPath::PbhChain).unwrap();
        assert!(!v.holds);
        assert!(!v.failure_certificates().is_empty());
        let cert = &v.failure_certificates()[0];
        assert_eq!(
            cert.eigenvalue.as_ref().unwrap().exact_value().unwrap(),
            &crate::ratlin::rat(4)
        );
    }

    #[test]
    fn fc_reduces_to_classical_controllability() {
        // F = I: FC iff (A, B) controllable.
        let a = RationalMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let b = RationalMatrix::col_from_i64(&[0, 1]);
        let s = SystemQuadruple::new(a.clone(), Some(b), None, RationalMatrix::identity(2)).unwrap();
        assert!(both(&s, Property::Fc));

        let b2 = RationalMatrix::col_from_i64(&[1, 0]);
        let s2 = SystemQuadruple::new(a, Some(b2), None, RationalMatrix::identity(2)).unwrap();
        assert!(!both(&s2, Property::Fc));
    }

    #[test]
    fn ifc_worked_examples() {
        assert!(!both(&example2(), Property::Ifc));
        assert!(both(&example3(), Property::Ifc));
    }

    #[test]
    fn ifc_controllable_pair_always_holds() {
        let s = sys(&[&[0, 1], &[0, 0]], Some(&[0, 1]), None, &[3, 7]);
        assert!(both(&s, Property::Ifc));
    }

    #[test]
    fn ifs_worked_examples() {
        assert!(both(&example4(), Property::Ifs));
        // Hurwitz A: vacuous.
        let s = sys(&[&[-1, 1], &[0, -2]], Some(&[1, 0]), None, &[0, 1]);
        assert!(both(&s, Property::Ifs));
        // Example 2 with A+I: integrator modes become unstable.
        let s2 = sys(&[&[1, 1], &[0, 1]], Some(&[1, 0]), None, &[1, 0]);
        assert!(!both(&s2, Property::Ifs));
    }

    #[test]
    fn fs_worked_examples() {
        assert!(!both(&example6(), Property::Fs));
        assert!(both(&example4(), Property::Fs));
        let hurwitz = sys(&[&[-1, 1], &[0, -2]], Some(&[0, 0]), None, &[1, 1]);
        assert!(both(&hurwitz, Property::Fs));
    }

    #[test]
    fn fo_worked_examples() {
        let v5 = test_fo(&example5(), DecisionPath::PbhChain).unwrap();
        assert!(v5.holds);
        // λ=2 single-step check sees both stacked ranks equal 3.
        assert!(v5
            .ranks_checked
            .iter()
            .any(|rc| rc.lhs == 3 && rc.rhs == 3));
        assert!(both(&example5(), Property::Fo));

        // C = I and F = C are always functional observable.
        let a = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let s = SystemQuadruple::new(
            a.clone(),
            None,
            Some(RationalMatrix::identity(2)),
            RationalMatrix::row_from_i64(&[5, -1]),
        )
        .unwrap();
        assert!(both(&s, Property::Fo));
        let c = RationalMatrix::row_from_i64(&[1, 1]);
        let s2 = SystemQuadruple::new(a, None, Some(c.clone()), c).unwrap();
        assert!(both(&s2, Property::Fo));
    }

    #[test]
    fn fd_worked_examples() {
        assert!(both(&example5(), Property::Fd));
        let hurwitz = sys(&[&[-1, 0], &[0, -2]], None, Some(&[0, 0]), &[1, 1]);
        assert!(both(&hurwitz, Property::Fd));
        // Unstable mode invisible to C but seen by F.
        let bad = sys(&[&[1, 0], &[0, -1]], None, Some(&[0, 1]), &[1, 0]);
        assert!(!both(&bad, Property::Fd));
    }

    #[test]
    fn toc_worked_examples() {
        let v = test_toc(&example6(), DecisionPath::PbhChain).unwrap();
        assert!(v.holds);
        // λ=4: rank([Fᵀ v₄]) = 2 = r + (j-1).
        assert!(v.ranks_checked.iter().any(|rc| rc.lhs == 2 && rc.rhs == 2));
        assert!(both(&example6(), Property::Toc));

        // F aligned with the uncontrollable eigenvector: fails.
        let s = sys(
            &[&[4, -4, 2, -5], &[1, 1, 1, -1], &[-1, 3, 1, 4], &[-1, 3, -1, 5]],
            Some(&[1, 0, 0, 0]),
            None,
            &[0, 1, 0, 1],
        );
        assert!(!both(&s, Property::Toc));
    }

    #[test]
    fn lattice_consistency_on_examples() {
        let tol = Tolerances::default();
        for s in [example2(), example6()] {
            let mut s = s;
            s.c = Some(RationalMatrix::row_from_i64(&vec![1; s.n()]));
            let rep = implication_lattice(&s, &tol).unwrap();
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn ifc_matches_all_shifts() {
        let tol = Tolerances::default();
        for s in [example2(), example3()] {
            let ifc = test_ifc(&s, DecisionPath::SubspaceOracle).unwrap().holds;
            assert_eq!(ifc, ifc_all_shifts(&s, &tol).unwrap());
        }
    }

    #[test]
    fn numeric_spectrum_dual_path() {
        // Rotation block plus a stable mode: irrational eigenvalues force
        // the numeric chain path; oracle stays exact.
        let s = sys(
            &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, -1]],
            Some(&[1, 0, 0]),
            None,
            &[0, 0, 1],
        );
        for p in [Property::Fc, Property::Toc] {
            both(&s, p);
        }
    }

    #[test]
    fn missing_matrix_errors() {
        let s = sys(&[&[1]], None, None, &[1]);
        assert!(matches!(
            test_fc(&s, DecisionPath::SubspaceOracle),
            Err(DecideError::MissingMatrix { which: "B" })
        ));
        assert!(matches!(
            test_fo(&s, DecisionPath::SubspaceOracle),
            Err(DecideError::MissingMatrix { which: "C" })
        ));
    }

    #[test]
    fn rank_deficient_f_rejected() {
        let a = RationalMatrix::identity(2);
        let f = RationalMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            SystemQuadruple::new(a, None, None, f),
            Err(DecideError::FNotFullRowRank)
        ));
    }
}
