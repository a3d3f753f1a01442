//! Constructive augmentation synthesis.
//!
//! Builds R1 (rows extending F to a basis of the intrinsic functional
//! subspace) and R2 (completion of the observable coordinate block), then
//! re-verifies the two controller rank conditions and the two observer rank
//! conditions from the raw matrices.

use num_traits::{One, Zero};

use crate::deciders::{
    test_fd, test_ifs, test_property, DecisionPath, Options, Property, SystemQuadruple, Tolerances,
};
use crate::numeric::{self, DEFAULT_EPS_REL};
use crate::ratlin::{column_space, nullspace, rat, Rat, RationalMatrix};
use crate::spectra::{char_poly, eigenvalues, shifted_matrix};
use crate::SynthError;

/// Kalman-style observability coordinates: T = [observable | unobservable]
/// basis columns, with the induced blocks of A, C and Fbar.
#[derive(Clone, Debug)]
pub struct ObservabilityDecomposition {
    pub t: RationalMatrix,
    pub t_inv: RationalMatrix,
    /// Observable dimension.
    pub h: usize,
    pub a_o: RationalMatrix,
    pub a_21: RationalMatrix,
    pub a_u: RationalMatrix,
    pub c_o: RationalMatrix,
    /// Leading h columns of Fbar·T; full row rank when valid.
    pub fbar_o: RationalMatrix,
}

/// Output of the full synthesis pipeline.
#[derive(Clone, Debug)]
pub struct AugmentationResult {
    /// (d−r)×n, possibly empty.
    pub r1: RationalMatrix,
    pub r2: RationalMatrix,
    /// [F; R1].
    pub fbar: RationalMatrix,
    /// dim of the smallest Aᵀ-invariant subspace containing Im(Fᵀ).
    pub d: usize,
    pub controller_conditions_ok: bool,
    pub observer_conditions_ok: bool,
    /// Asymptotic-variant feasibility: IFS and FD both hold.
    pub asymptotic_ok: bool,
    pub decomposition: ObservabilityDecomposition,
}

/// Rows of F, FA, FA², … kept greedily while independent of everything kept
/// so far, minus the rows of F itself. [F; R1] then spans the smallest
/// Aᵀ-invariant row space containing F, with rank d.
pub fn construct_r1(a: &RationalMatrix, f: &RationalMatrix) -> Result<RationalMatrix, SynthError> {
    if f.rank() != f.rows() {
        return Err(SynthError::NotFullRowRank);
    }
    let n = a.rows();
    let mut kept = f.clone();
    let mut kept_rank = kept.rank();
    let mut r1 = RationalMatrix::zeros(0, n);
    let mut block = f.clone();
    for _ in 1..n {
        block = block.mul(a);
        for i in 0..block.rows() {
            let row = block.row(i);
            let trial = kept.vstack(&row);
            if trial.rank() > kept_rank {
                kept = trial;
                kept_rank += 1;
                r1 = r1.vstack(&row);
            }
        }
    }
    Ok(r1)
}

/// The two controller rank identities for F̄ = [F; R1]:
/// invariance rank([F̄A; F̄]) = rank(F̄), and the PBH test on the reduced
/// pair (F̄AF̄⁻, F̄B) at the eigenvalues of the reduced matrix.
pub fn verify_controller_conditions(
    a: &RationalMatrix,
    b: &RationalMatrix,
    fbar: &RationalMatrix,
) -> Result<(bool, bool), SynthError> {
    let d = fbar.rows();
    if fbar.rank() != d {
        return Err(SynthError::NotFullRowRank);
    }
    let fa = fbar.mul(a);
    let invariant = fa.vstack(fbar).rank() == d;

    let fbar_pinv = fbar.right_inverse()?;
    let m = fa.mul(&fbar_pinv);
    let g = fbar.mul(b);
    let mut pbh = true;
    for ev in eigenvalues(&m) {
        match ev.exact_value() {
            Some(lambda) => {
                let test = shifted_matrix(&m, lambda).hstack(&g);
                if test.rank() != d {
                    pbh = false;
                }
            }
            None => {
                let mc = numeric::to_cmatrix(&m);
                let test = numeric::hstack(
                    &numeric::shifted(&mc, ev.approx()),
                    &numeric::to_cmatrix(&g),
                );
                if numeric::rank(&test, DEFAULT_EPS_REL) != d {
                    pbh = false;
                }
            }
        }
    }
    Ok((invariant, pbh))
}

/// Observability coordinates for (A, C): T stacks a basis of Im(𝒪ᵀ) and a
/// basis of ker(𝒪). The unobservable block must be invisible to Fbar.
pub fn observability_decomposition(
    a: &RationalMatrix,
    c: &RationalMatrix,
    fbar: &RationalMatrix,
) -> Result<ObservabilityDecomposition, SynthError> {
    let n = a.rows();
    let obs = RationalMatrix::observability_matrix(a, c)?;
    let observable = column_space(&obs.transpose());
    let unobservable = nullspace(&obs);
    let h = observable.dim();
    let t = observable.basis().hstack(unobservable.basis());
    let t_inv = t.inverse().ok_or(SynthError::InvalidDecomposition)?;

    let a_t = t_inv.mul(a).mul(&t);
    // Block structure must be exact: A maps ker(𝒪) into itself.
    for i in 0..h {
        for j in h..n {
            if !a_t[(i, j)].is_zero() {
                return Err(SynthError::InvalidDecomposition);
            }
        }
    }
    let c_t = c.mul(&t);
    for i in 0..c_t.rows() {
        for j in h..n {
            if !c_t[(i, j)].is_zero() {
                return Err(SynthError::InvalidDecomposition);
            }
        }
    }
    let f_t = fbar.mul(&t);
    for i in 0..f_t.rows() {
        for j in h..n {
            if !f_t[(i, j)].is_zero() {
                return Err(SynthError::FbarNotObservableFunctional);
            }
        }
    }

    Ok(ObservabilityDecomposition {
        a_o: RationalMatrix::from_fn(h, h, |i, j| a_t[(i, j)].clone()),
        a_21: RationalMatrix::from_fn(n - h, h, |i, j| a_t[(h + i, j)].clone()),
        a_u: RationalMatrix::from_fn(n - h, n - h, |i, j| a_t[(h + i, h + j)].clone()),
        c_o: RationalMatrix::from_fn(c.rows(), h, |i, j| c_t[(i, j)].clone()),
        fbar_o: RationalMatrix::from_fn(fbar.rows(), h, |i, j| f_t[(i, j)].clone()),
        t,
        t_inv,
        h,
    })
}

/// R2 = [F̄_o^⊥ 0]·T⁻¹ where F̄_o^⊥ completes the rows of F̄_o to a basis of
/// the observable coordinate space, by greedy standard-basis insertion.
pub fn construct_r2(decomp: &ObservabilityDecomposition) -> Result<RationalMatrix, SynthError> {
    let d = decomp.fbar_o.rows();
    let h = decomp.h;
    if decomp.fbar_o.rank() != d || d > h {
        return Err(SynthError::InvalidDecomposition);
    }
    let mut kept = decomp.fbar_o.clone();
    let mut kept_rank = d;
    let mut comp = RationalMatrix::zeros(0, h);
    for k in 0..h {
        if kept_rank == h {
            break;
        }
        let e = RationalMatrix::from_fn(1, h, |_, j| if j == k { Rat::one() } else { Rat::zero() });
        let trial = kept.vstack(&e);
        if trial.rank() > kept_rank {
            kept = trial;
            kept_rank += 1;
            comp = comp.vstack(&e);
        }
    }
    let n = decomp.t.rows();
    let padded = comp.hstack(&RationalMatrix::zeros(comp.rows(), n - h));
    Ok(padded.mul(&decomp.t_inv))
}

/// The two observer rank identities for the augmented functional [F; R]:
/// the stacked-shift identity and the λ-dependent identity, checked at all
/// eigenvalues of A plus one non-eigenvalue rational probe.
pub fn verify_observer_conditions(
    a: &RationalMatrix,
    c: &RationalMatrix,
    f: &RationalMatrix,
    r: &RationalMatrix,
) -> (bool, bool) {
    let fa = f.mul(a);
    let ra = r.mul(a);
    let ca = c.mul(a);
    let base = RationalMatrix::vstack_all(&[&ca, c, f, r]);
    let target = base.rank();
    let flag1 = RationalMatrix::vstack_all(&[&fa, &ra, &ca, c, f, r]).rank() == target;

    let shifted_rank_exact = |lambda: &Rat| -> usize {
        let top = f.scale(lambda).sub(&fa);
        let mid = r.scale(lambda).sub(&ra);
        RationalMatrix::vstack_all(&[&top, &mid, &ca, c]).rank()
    };
    let mut flag2 = true;
    let evs = eigenvalues(a);
    for ev in &evs {
        match ev.exact_value() {
            Some(lambda) => {
                if shifted_rank_exact(lambda) != target {
                    flag2 = false;
                }
            }
            None => {
                let z = ev.approx();
                let cf = numeric::to_cmatrix(f);
                let cr = numeric::to_cmatrix(r);
                let top = cf.map(|x| x * z) - numeric::to_cmatrix(&fa);
                let mid = cr.map(|x| x * z) - numeric::to_cmatrix(&ra);
                let stack = numeric::vstack(
                    &numeric::vstack(&top, &mid),
                    &numeric::vstack(&numeric::to_cmatrix(&ca), &numeric::to_cmatrix(c)),
                );
                if numeric::rank(&stack, DEFAULT_EPS_REL) != target {
                    flag2 = false;
                }
            }
        }
    }
    // Generic probe: the identity is polynomial in λ, so one value outside
    // the spectrum certifies the generic rank.
    let mut probe = rat(1);
    while evs
        .iter()
        .any(|ev| ev.exact_value().map(|v| *v == probe).unwrap_or(false))
    {
        probe = &probe + &rat(1);
    }
    if shifted_rank_exact(&probe) != target {
        flag2 = false;
    }
    (flag1, flag2)
}

/// Full pipeline: require IFC and FO, construct R1 and R2, re-verify all
/// four rank conditions, and report the asymptotic-variant feasibility.
pub fn gsp_synthesize(
    sys: &SystemQuadruple,
    tol: &Tolerances,
) -> Result<AugmentationResult, SynthError> {
    let a = &sys.a;
    let b = sys.b()?;
    let c = sys.c()?;
    let f = &sys.f;

    let opts = Options::default();
    let ifc = test_property(sys, Property::Ifc, DecisionPath::PbhChain, tol, &opts)?;
    if !ifc.holds {
        return Err(SynthError::NotIFC {
            certificates: ifc.failure_certificates(),
        });
    }
    let fo = test_property(sys, Property::Fo, DecisionPath::PbhChain, tol, &opts)?;
    if !fo.holds {
        return Err(SynthError::NotFO {
            certificates: fo.failure_certificates(),
        });
    }

    let r1 = construct_r1(a, f)?;
    let fbar = f.vstack(&r1);
    let d = fbar.rows();

    let (c1, c2) = verify_controller_conditions(a, b, &fbar)?;
    let decomposition = observability_decomposition(a, c, &fbar)?;
    let r2 = construct_r2(&decomposition)?;
    let r = r1.vstack(&r2);
    let (o1, o2) = verify_observer_conditions(a, c, f, &r);

    let asymptotic_ok = test_ifs(sys, DecisionPath::SubspaceOracle)?.holds
        && test_fd(sys, DecisionPath::SubspaceOracle)?.holds;

    Ok(AugmentationResult {
        r1,
        r2,
        fbar,
        d,
        controller_conditions_ok: c1 && c2,
        observer_conditions_ok: o1 && o2,
        asymptotic_ok,
        decomposition,
    })
}

/// Exact Ackermann pole placement on the reduced pair (F̄AF̄⁻, F̄B).
/// Single-input only; returns Z with σ(F̄AF̄⁻ − F̄B·Z) at the desired poles.
pub fn design_feedback_gain(
    a: &RationalMatrix,
    b: &RationalMatrix,
    fbar: &RationalMatrix,
    desired_poles: &[Rat],
) -> Result<RationalMatrix, SynthError> {
    let (c1, c2) = verify_controller_conditions(a, b, fbar)?;
    if !c1 || !c2 {
        return Err(SynthError::ConditionsNotMet {
            what: "controller rank conditions fail on the reduced pair".into(),
        });
    }
    let d = fbar.rows();
    let fbar_pinv = fbar.right_inverse()?;
    let m = fbar.mul(a).mul(&fbar_pinv);
    let g = fbar.mul(b);
    if g.cols() != 1 {
        return Err(SynthError::MultiInputUnsupported);
    }
    if desired_poles.len() != d {
        return Err(SynthError::ConditionsNotMet {
            what: format!("need {d} desired poles, got {}", desired_poles.len()),
        });
    }
    let ctrb = RationalMatrix::controllability_matrix(&m, &g)?;
    let ctrb_inv = ctrb.inverse().ok_or(SynthError::ConditionsNotMet {
        what: "reduced pair is not controllable".into(),
    })?;

    // Desired monic polynomial coefficients, constant term first.
    let mut coeffs = vec![Rat::one()];
    for p in desired_poles {
        let mut next = vec![Rat::zero(); coeffs.len() + 1];
        for (i, ci) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] - &(p * ci);
        }
        coeffs = next;
    }
    // p(M) via Horner on the coefficient list.
    let mut pm = RationalMatrix::zeros(d, d);
    for c in coeffs.iter().rev() {
        pm = pm.mul(&m);
        let id = RationalMatrix::identity(d).scale(c);
        pm = pm.add(&id);
    }
    let last = RationalMatrix::from_fn(1, d, |_, j| {
        if j == d - 1 {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let z = last.mul(&ctrb_inv).mul(&pm);

    let closed = m.sub(&g.mul(&z));
    let achieved = char_poly(&closed);
    if achieved.coeffs() != coeffs.as_slice() {
        return Err(SynthError::ConditionsNotMet {
            what: "closed-loop characteristic polynomial mismatch".into(),
        });
    }
    Ok(z)
}
