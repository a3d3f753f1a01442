//! End-to-end acceptance checks against the six worked examples plus
//! randomized cross-validation. Each test prints one pass line.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use fsa::deciders::{
    decide_both, ifc_all_shifts, test_property, DecisionPath, Options, Property, PropertyVerdict,
    SystemQuadruple, Tolerances,
};
use fsa::harness::{generate_system, JordanSpec};
use fsa::ratlin::{column_space, krylov_closure, nullspace, rat, Rat, RationalMatrix, Subspace};
use fsa::spectra::{
    char_poly, eigenvalues, first_visible_index, generalized_eigenspace, jordan_chains,
    shifted_matrix, Eigenvalue, OperatorTag,
};
use fsa::synth::{
    construct_r1, design_feedback_gain, gsp_synthesize, verify_controller_conditions,
    verify_observer_conditions,
};

fn pass(n: u32) {
    println!("criterion {n}: pass");
}

fn both(sys: &SystemQuadruple, p: Property) -> (PropertyVerdict, PropertyVerdict) {
    decide_both(sys, p, &Tolerances::default(), &Options::default()).unwrap()
}

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
        Some(&[1, 0, 0, 0]),
        &[1, 0, 0, 0],
    )
}

fn example4() -> SystemQuadruple {
    sys(
        &[
            &[5, -50, 59, 64],
            &[2, -29, 32, 36],
            &[-4, 54, -66, -72],
            &[5, -67, 79, 87],
        ],
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

/// Deterministic random stream of systems with exact integer spectra.
fn random_system(rng: &mut ChaCha8Rng, max_n: usize, m: usize, p: usize, r: usize) -> SystemQuadruple {
    let n = rng.gen_range(2..=max_n);
    let mut blocks: Vec<(Rat, Vec<usize>)> = Vec::new();
    let mut left = n;
    while left > 0 {
        let len = rng.gen_range(1..=left.min(3));
        let lambda = rat(rng.gen_range(-2..=2));
        if let Some((_, lens)) = blocks.iter_mut().find(|(l, _)| *l == lambda) {
            lens.push(len);
        } else {
            blocks.push((lambda, vec![len]));
        }
        left -= len;
    }
    let spec = JordanSpec {
        blocks,
        seed: rng.gen(),
    };
    generate_system(&spec, m, p, r.min(n)).unwrap()
}

#[test]
fn criterion_01_example1_fc_chain_records() {
    let start = Instant::now();
    let s = example1();
    let (oracle, chain) = both(&s, Property::Fc);
    assert!(oracle.holds && chain.holds);

    // Chain certificates must record j = 2 at λ = 2 and j = 1 at λ = 3.
    let relations: Vec<&str> = chain.certificates.iter().map(|c| c.relation.as_str()).collect();
    assert!(
        relations.iter().any(|r| r.contains("j = 2 at λ = 2")),
        "missing j=2 record at λ=2: {relations:?}"
    );
    assert!(
        relations.iter().any(|r| r.contains("j = 1 at λ = 3")),
        "missing j=1 record at λ=3: {relations:?}"
    );

    // Any valid chain basis gives Bᵀv₁ = 0, Fv₁ = 0, Bᵀv₂ ≠ 0.
    let at = s.a.transpose();
    let bt = s.b().unwrap().transpose();
    let lam2 = Eigenvalue::exact(rat(2), 3);
    let chains = jordan_chains(&at, &lam2, OperatorTag::OfATranspose).unwrap();
    assert_eq!(chains.len(), 1);
    assert!(bt.mul(&chains[0].vector(1)).is_zero());
    assert!(s.f.mul(&chains[0].vector(1)).is_zero());
    assert!(!bt.mul(&chains[0].vector(2)).is_zero());
    assert_eq!(first_visible_index(&chains[0], &bt).j, 2);

    let lam3 = Eigenvalue::exact(rat(3), 1);
    let chains3 = jordan_chains(&at, &lam3, OperatorTag::OfATranspose).unwrap();
    assert_eq!(first_visible_index(&chains3[0], &bt).j, 1);

    assert!(start.elapsed() < Duration::from_secs(1), "too slow");
    pass(1);
}

#[test]
fn criterion_02_example2_fc_without_ifc() {
    let s = example2();
    let (fc, fc_chain) = both(&s, Property::Fc);
    assert!(fc.holds && fc_chain.holds);
    let (ifc, ifc_chain) = both(&s, Property::Ifc);
    assert!(!ifc.holds && !ifc_chain.holds);

    // V_F = span{e1, e2}, Im(C_(A,B)) = span{e1}, no inclusion.
    let v_f = krylov_closure(&s.a.transpose(), &s.f.transpose()).unwrap();
    assert_eq!(v_f, Subspace::full(2));
    let reach = column_space(
        &RationalMatrix::controllability_matrix(&s.a, s.b().unwrap()).unwrap(),
    );
    assert_eq!(reach.dim(), 1);
    assert!(reach
        .contains_vector(&RationalMatrix::col_from_i64(&[1, 0]))
        .unwrap());
    assert!(!reach.contains(&v_f).unwrap());
    pass(2);
}

#[test]
fn criterion_03_example3_ifc_and_r1() {
    let s = example3();
    let (ifc, ifc_chain) = both(&s, Property::Ifc);
    assert!(ifc.holds && ifc_chain.holds);

    let r1 = construct_r1(&s.a, &s.f).unwrap();
    let fbar = s.f.vstack(&r1);
    assert_eq!(fbar.rank(), 2);
    // Row space of [F; R1] is span{e1, e2}; R1 itself is e2ᵀ modulo F.
    let rows = Subspace::from_columns(&fbar.transpose());
    let expect = Subspace::from_columns(&RationalMatrix::from_i64(&[
        &[1, 0],
        &[0, 1],
        &[0, 0],
        &[0, 0],
    ]));
    assert_eq!(rows, expect);

    let flags = verify_controller_conditions(&s.a, s.b().unwrap(), &fbar).unwrap();
    assert_eq!(flags, (true, true));
    pass(3);
}

#[test]
fn criterion_04_example4_ifs() {
    let s = example4();
    let eigs: Vec<(Rat, usize)> = eigenvalues(&s.a)
        .iter()
        .map(|e| (e.exact_value().unwrap().clone(), e.alg_mult))
        .collect();
    let mut sorted = eigs.clone();
    sorted.sort();
    assert_eq!(sorted, vec![(rat(-3), 1), (rat(-2), 1), (rat(1), 2)]);

    let (ifs, ifs_chain) = both(&s, Property::Ifs);
    assert!(ifs.holds && ifs_chain.holds);

    // λ = 1: an uncontrollable eigenvector of Aᵀ exists (Bᵀv₁ = 0) and F
    // annihilates the entire λ = 1 chain space.
    let at = s.a.transpose();
    let n1 = shifted_matrix(&at, &rat(1));
    let bt = s.b().unwrap().transpose();
    let uncontrollable = nullspace(&n1.vstack(&bt));
    assert!(uncontrollable.dim() >= 1);
    let lam1 = Eigenvalue::exact(rat(1), 2);
    let gen = generalized_eigenspace(&at, &lam1).unwrap();
    assert!(s.f.mul(gen.basis()).is_zero());
    pass(4);
}

#[test]
fn criterion_05_example5_fo() {
    let s = example5();
    let (fo, fo_chain) = both(&s, Property::Fo);
    assert!(fo.holds && fo_chain.holds);

    // λ = 2 chain has j = 2 and the stacked rank tests both read 3.
    let relations: Vec<&str> = fo_chain
        .certificates
        .iter()
        .map(|c| c.relation.as_str())
        .collect();
    assert!(
        relations.iter().any(|r| r.contains("j = 2 at λ = 2")),
        "{relations:?}"
    );
    let at2: Vec<_> = fo_chain
        .ranks_checked
        .iter()
        .filter(|r| r.description.contains("λ = 2"))
        .collect();
    assert!(!at2.is_empty());
    assert!(at2.iter().all(|r| r.lhs == 3 && r.rhs == 3), "{at2:?}");

    // λ = 3 chain is vacuous: C sees its bottom eigenvector.
    let lam3 = Eigenvalue::exact(rat(3), 1);
    let chains = jordan_chains(&s.a, &lam3, OperatorTag::OfA).unwrap();
    let c = s.c().unwrap();
    assert_eq!(first_visible_index(&chains[0], c).j, 1);
    assert!(relations.iter().any(|r| r.contains("j = 1 at λ = 3")));
    pass(5);
}

#[test]
fn criterion_06_example6_toc_without_fc() {
    let s = example6();
    let (toc, toc_chain) = both(&s, Property::Toc);
    assert!(toc.holds && toc_chain.holds);
    let at4 = toc_chain
        .ranks_checked
        .iter()
        .find(|r| r.description.contains("λ = 4"))
        .expect("λ = 4 check recorded");
    assert_eq!((at4.lhs, at4.rhs), (2, 2));

    let (fc, fc_chain) = both(&s, Property::Fc);
    assert!(!fc.holds && !fc_chain.holds);
    let fail = fc_chain.failure_certificates();
    assert!(fail.iter().any(|c| {
        c.eigenvalue
            .as_ref()
            .and_then(|e| e.exact_value())
            .map(|v| *v == rat(4))
            .unwrap_or(false)
    }));
    pass(6);
}

#[test]
fn criterion_07_classical_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1701);
    for _ in 0..50 {
        let base = random_system(&mut rng, 5, 1, 1, 1);
        let n = base.n();
        let full = SystemQuadruple::new(
            base.a.clone(),
            base.b.clone(),
            base.c.clone(),
            RationalMatrix::identity(n),
        )
        .unwrap();

        let controllable =
            RationalMatrix::controllability_matrix(&full.a, full.b().unwrap())
                .unwrap()
                .rank()
                == n;
        let (fc, fc_chain) = both(&full, Property::Fc);
        assert_eq!(fc.holds, controllable);
        assert_eq!(fc_chain.holds, controllable);

        let observable = RationalMatrix::observability_matrix(&full.a, full.c().unwrap())
            .unwrap()
            .rank()
            == n;
        let (fo, fo_chain) = both(&full, Property::Fo);
        assert_eq!(fo.holds, observable);
        assert_eq!(fo_chain.holds, observable);
    }
    pass(7);
}

#[test]
fn criterion_08_fuzz_cli_run() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fsa"))
        .args(["fuzz", "--count", "200", "--seed", "42"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "exit: {:?}, out: {stdout}", out.status);
    assert!(stdout.contains("mismatches: 0"), "{stdout}");
    assert!(stdout.contains("lattice violations: 0"), "{stdout}");
    assert!(start.elapsed() < Duration::from_secs(60), "too slow");
    pass(8);
}

#[test]
fn criterion_09_gsp_pipeline_on_fuzzed_systems() {
    let tol = Tolerances::default();
    let opts = Options::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    let mut hits = 0usize;
    for i in 0..250 {
        let s = if i % 5 == 0 {
            // Force classical-style cases so the IFC ∧ FO branch is well fed.
            let base = random_system(&mut rng, 4, 1, 1, 1);
            let n = base.n();
            SystemQuadruple::new(base.a, base.b, base.c, RationalMatrix::identity(n)).unwrap()
        } else {
            random_system(&mut rng, 4, 1, 1, 1)
        };
        let ifc = test_property(&s, Property::Ifc, DecisionPath::SubspaceOracle, &tol, &opts)
            .unwrap()
            .holds;
        let fo = test_property(&s, Property::Fo, DecisionPath::SubspaceOracle, &tol, &opts)
            .unwrap()
            .holds;
        if !(ifc && fo) {
            continue;
        }
        hits += 1;
        let out = gsp_synthesize(&s, &tol).expect("synthesis succeeds under IFC ∧ FO");
        assert!(out.controller_conditions_ok && out.observer_conditions_ok);

        // The four rank identities re-verify from the returned matrices.
        let fbar = s.f.vstack(&out.r1);
        assert_eq!(
            verify_controller_conditions(&s.a, s.b().unwrap(), &fbar).unwrap(),
            (true, true)
        );
        let r = out.r1.vstack(&out.r2);
        assert_eq!(
            verify_observer_conditions(&s.a, s.c().unwrap(), &s.f, &r),
            (true, true)
        );

        // FO is preserved under completion by R1.
        let augmented =
            SystemQuadruple::new(s.a.clone(), s.b.clone(), s.c.clone(), fbar).unwrap();
        let fo_aug = test_property(
            &augmented,
            Property::Fo,
            DecisionPath::SubspaceOracle,
            &tol,
            &opts,
        )
        .unwrap();
        assert!(fo_aug.holds);
    }
    assert!(hits >= 10, "only {hits} IFC ∧ FO systems; stream too thin");
    pass(9);
}

#[test]
fn criterion_10_ifc_equals_all_shifts() {
    let tol = Tolerances::default();
    let opts = Options::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..100 {
        let s = random_system(&mut rng, 5, 1, 1, 2);
        let ifc = test_property(&s, Property::Ifc, DecisionPath::SubspaceOracle, &tol, &opts)
            .unwrap()
            .holds;
        let shifts = ifc_all_shifts(&s, &tol).unwrap();
        assert_eq!(ifc, shifts);
    }
    pass(10);
}

#[test]
fn criterion_11_exact_pole_placement() {
    let tol = Tolerances::default();
    let opts = Options::default();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut placed = 0usize;

    let try_place = |s: &SystemQuadruple| {
        let r1 = construct_r1(&s.a, &s.f).unwrap();
        let fbar = s.f.vstack(&r1);
        let d = fbar.rows();
        let poles: Vec<Rat> = (1..=d as i64).map(|k| rat(-k)).collect();
        let z = design_feedback_gain(&s.a, s.b().unwrap(), &fbar, &poles).unwrap();

        let m = fbar.mul(&s.a).mul(&fbar.right_inverse().unwrap());
        let g = fbar.mul(s.b().unwrap());
        let closed = m.sub(&g.mul(&z));
        let achieved = char_poly(&closed);
        let mut want = vec![rat(1)];
        for p in &poles {
            let mut next = vec![rat(0); want.len() + 1];
            for (i, ci) in want.iter().enumerate() {
                next[i + 1] = &next[i + 1] + ci;
                next[i] = &next[i] - &(p * ci);
            }
            want = next;
        }
        assert_eq!(achieved.coeffs(), want.as_slice());
    };

    try_place(&example3());
    placed += 1;

    for _ in 0..200 {
        let s = random_system(&mut rng, 4, 1, 1, 1);
        let ifc = test_property(&s, Property::Ifc, DecisionPath::SubspaceOracle, &tol, &opts)
            .unwrap()
            .holds;
        if !ifc {
            continue;
        }
        try_place(&s);
        placed += 1;
    }
    assert!(placed >= 4, "only {placed} placements exercised");
    pass(11);
}
