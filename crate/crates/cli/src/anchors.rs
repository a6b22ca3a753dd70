//! The `paper` command: every anchored value recomputed and compared.

use std::path::Path;

use flatloop_core::flows::{
    ansatz_loop, count_connecting_orbits, find_periodic_solutions, integrate_chi, integrate_orbit, solve_cylinder,
    StationaryPoint,
};
use flatloop_core::geodesics::{
    enumerate_components, jacobi_spectrum, lattice_ball, perturbed_critical_points, perturbed_jacobi_spectrum,
};
use flatloop_core::homology::{
    binomial, floer_bott_cohomology, homology_of_complex, morse_bott_homology, morse_witten_complex_perturbed,
    sublevel_singular_homology, ChainComplex, Coefficients, IntMatrix,
};
use flatloop_core::symplectic::{
    cz_from_quadratic, generalized_cz_shear, grading_shift, linearized_flow, perturbed_quadratic, rs_index,
    LinearizedSpec, OffCyclePath, PolarConnector, ShearPolarRotation, DEFAULT_GRID, DEFAULT_TOLERANCE,
};
use flatloop_core::torus::{energy, perturbed_energy, symplectic_action};
use flatloop_core::{
    Branch, FlatTorus, FreeHamiltonian, HalfInteger, LatticeVector, LoopSample, PendulumHamiltonian, PhaseLoopSample,
    FOUR_PI_SQ, TWO_PI_SQ,
};
use serde::Serialize;

use crate::report::{emit, r12, to_json};
use crate::CliError;

pub const SECTIONS: [&str; 4] = ["energy", "homology", "index", "appendix"];

const SAMPLES: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct Anchor {
    pub section: &'static str,
    pub id: &'static str,
    pub claim: &'static str,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct AnchorReport {
    pub anchors: Vec<Anchor>,
    pub passed: usize,
    pub failed: usize,
}

struct Section {
    name: &'static str,
    anchors: Vec<Anchor>,
}

impl Section {
    fn new(name: &'static str) -> Self {
        Self { name, anchors: Vec::new() }
    }

    fn push(&mut self, id: &'static str, claim: &'static str, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.anchors.push(Anchor {
            section: self.name,
            id,
            claim,
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    /// Records `observed <= bound`.
    fn bound(&mut self, id: &'static str, claim: &'static str, bound: f64, observed: f64) {
        self.push(id, claim, format!("<= {bound:e}"), format!("{:e}", r12(observed)), observed <= bound);
    }

    fn equal<T: PartialEq + std::fmt::Debug>(&mut self, id: &'static str, claim: &'static str, expected: T, observed: T) {
        let pass = expected == observed;
        self.push(id, claim, format!("{expected:?}"), format!("{observed:?}"), pass);
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn small_classes(n: usize) -> Vec<LatticeVector> {
    lattice_ball(n, 9.0)
}

fn energy_section() -> Section {
    let mut s = Section::new("energy");
    let mut worst_energy = 0.0f64;
    let mut worst_action = 0.0f64;
    for n in 1..=3 {
        let torus = FlatTorus::new(n).expect("positive dimension");
        let hamiltonian = FreeHamiltonian::new(torus);
        for k in small_classes(n) {
            let expected = TWO_PI_SQ * k.norm_sq() as f64;
            let q: Vec<f64> = (0..n).map(|j| 0.1 + 0.2 * j as f64).collect();
            let lp = LoopSample::geodesic(torus, &k, &q, SAMPLES).expect("valid geodesic");
            worst_energy = worst_energy.max(relative(energy(&lp), expected));
            let orbit = PhaseLoopSample::free_orbit(torus, &k, &q, SAMPLES).expect("valid orbit");
            worst_action = worst_action.max(relative(symplectic_action(&orbit, &hamiltonian), expected));
        }
    }
    s.bound("geodesic-energy", "I(γ_{k,q}) = 2π²|k|² for |k| ≤ 3, n ≤ 3 (relative error)", 1e-9, worst_energy);
    s.bound("orbit-action", "A_H(x_{u0,k}) = 2π²|k|² for |k| ≤ 3, n ≤ 3 (relative error)", 1e-9, worst_action);

    let count = |n: usize, a: f64| enumerate_components(FlatTorus::new(n).expect("positive dimension"), a).len();
    s.equal("components", "components G^k below a: (n=1, a=19.74), (n=2, a=0), (n=2, a=19.74)", (3, 1, 5), (
        count(1, 19.74),
        count(2, 0.0),
        count(2, 19.74),
    ));

    let mut bott = true;
    let mut spectra = true;
    for n in 1..=3 {
        let torus = FlatTorus::new(n).expect("positive dimension");
        bott &= enumerate_components(torus, TWO_PI_SQ * 4.0).iter().all(|c| c.morse_index == 0 && c.nullity == n);
        let spectrum = jacobi_spectrum(torus, 4);
        spectra &= spectrum.eigenvalues.iter().enumerate().all(|(l, &(v, m))| {
            v == FOUR_PI_SQ * (l * l) as f64 && m == if l == 0 { n } else { 2 * n }
        });
        spectra &= spectrum.negative_count == 0 && spectrum.kernel_dim == n;
    }
    s.equal("bott-nondegenerate", "every G^k has index 0 and nullity n = dim G^k", true, bott);
    s.equal("jacobi-spectrum", "Jacobi spectrum {4π²l²} with multiplicities (n, 2n, 2n, ...)", true, spectra);
    s
}

fn homology_section() -> Section {
    let mut s = Section::new("homology");
    let t2 = FlatTorus::new(2).expect("positive dimension");
    let m = morse_bott_homology(t2, TWO_PI_SQ);
    s.equal("morse-n2-k1", "HM^{a,Bott}_* of Λ T² at a = 2π² has ranks (5, 10, 5)", (5, 10, 5), (
        m.free_rank(0),
        m.free_rank(1),
        m.free_rank(2),
    ));
    let f = floer_bott_cohomology(FlatTorus::new(1).expect("positive dimension"), 0.0);
    s.equal("floer-n1-k0", "HF^0 = Z and HF^{-1} = Z for the constant loops of S¹", ("Z".to_string(), "Z".to_string()), (
        f.group(0).render(f.coefficients),
        f.group(-1).render(f.coefficients),
    ));

    let mut agree = true;
    let mut checked = 0;
    for n in 1..=3 {
        let torus = FlatTorus::new(n).expect("positive dimension");
        for k in lattice_ball(n, 4.0) {
            let a = TWO_PI_SQ * k.norm_sq() as f64;
            let count = enumerate_components(torus, a).len();
            let (morse, floer, sub) =
                (morse_bott_homology(torus, a), floer_bott_cohomology(torus, a), sublevel_singular_homology(torus, &k));
            agree &= morse.is_torsion_free() && floer.is_torsion_free() && sub.is_torsion_free();
            for i in 0..=n as i64 + 1 {
                let expected = if i as usize <= n { count * binomial(n, i as usize) } else { 0 };
                agree &= morse.free_rank(i) == expected && floer.free_rank(-i) == expected && sub.free_rank(i) == expected;
            }
            checked += 1;
        }
    }
    s.push(
        "three-way",
        "Morse-Bott, Floer-Bott (regraded) and sublevel homology agree with #components·C(n,i), no torsion (n ≤ 3, |k| ≤ 2)",
        "agree",
        format!("{} on {checked} sublevels", if agree { "agree" } else { "disagree" }),
        agree,
    );

    let klein = ChainComplex::new(
        Coefficients::Integers,
        0,
        vec![1, 2, 1],
        vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 2), IntMatrix::from_rows(2, 1, &[[0], [2]])],
    )
    .expect("valid complex");
    let kh = homology_of_complex(&klein).expect("valid complex");
    s.equal("klein-torsion", "Klein bottle H_1 = Z + Z/2 (torsion path of the Smith normal form)", "Z + Z/2".to_string(), kh
        .group(1)
        .render(Coefficients::Integers));
    s
}

fn half(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

fn rs(path: &(impl flatloop_core::SymplecticPath + ?Sized)) -> Result<HalfInteger, String> {
    rs_index(path, DEFAULT_GRID, DEFAULT_TOLERANCE).map(|r| r.value).map_err(|e| e.to_string())
}

fn show(r: &Result<HalfInteger, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn index_section() -> Section {
    let mut s = Section::new("index");
    let observed: Vec<String> = (1..=3)
        .map(|n| generalized_cz_shear(n).map(|r| r.value.to_string()).unwrap_or_else(|e| format!("error: {e}")))
        .collect();
    let expected: Vec<String> = (1..=3).map(|n| half(-n).to_string()).collect();
    s.push("shear", "generalized μ_CZ of the free linearized flow is -n/2 (n = 1, 2, 3)", expected.join(", "), observed.join(", "), observed == expected);

    let rotation = rs(&ShearPolarRotation { n: 1 });
    let connector = rs(&PolarConnector::new(1));
    let total = match (&rotation, &connector) {
        (Ok(a), Ok(b)) => Ok(*a + *b),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    s.push(
        "polar-side",
        "rotation part plus connector: ½(-2 + 1) = -½",
        "-1 + 1/2 = -1/2",
        format!("{} + {} = {}", show(&rotation), show(&connector), show(&total)),
        rotation == Ok(half(-2)) && connector == Ok(half(1)) && total == Ok(half(-1)),
    );
    let off = rs(&OffCyclePath::new(1));
    s.push("off-cycle", "shear pushed off the Maslov cycle: ½(0 - 1) = -½", "-1/2", show(&off), off == Ok(half(-1)));

    let shifts: Vec<HalfInteger> = (1..=3).map(|n| grading_shift(half(-n), n)).collect();
    let shown: Vec<String> = shifts.iter().map(|h| h.to_string()).collect();
    s.push(
        "grading-shift",
        "μ + dim G/2 = -n/2 + n/2 = 0 (n = 1, 2, 3)",
        "0, 0, 0",
        shown.join(", "),
        shifts.iter().all(|&h| h == HalfInteger::ZERO),
    );
    s
}

fn appendix_section() -> Section {
    let mut s = Section::new("appendix");
    let pair = perturbed_critical_points(1, 0.0, 256).expect("k = 1 is valid");
    let numeric = (
        perturbed_energy(&pair.gamma_minus, &pair.potential).unwrap_or(f64::NAN),
        perturbed_energy(&pair.gamma_plus, &pair.potential).unwrap_or(f64::NAN),
    );
    let closed = (TWO_PI_SQ + 1.0, TWO_PI_SQ - 1.0);
    let err = relative(numeric.0, closed.0).max(relative(numeric.1, closed.1));
    s.push(
        "actions",
        "I_V(γ∓) = 2π² ± 1 for k = 1",
        format!("({}, {})", r12(closed.0), r12(closed.1)),
        format!("({}, {})", r12(numeric.0), r12(numeric.1)),
        err <= 1e-9 && pair.actions == closed,
    );

    let exact = [Branch::Minus, Branch::Plus].into_iter().all(|b| {
        let shift = if b == Branch::Minus { 1.0 } else { -1.0 };
        perturbed_jacobi_spectrum(b, 5)
            .eigenvalues
            .iter()
            .enumerate()
            .all(|(l, &(v, m))| v == FOUR_PI_SQ * (l * l) as f64 - shift && m == if l == 0 { 1 } else { 2 })
    });
    s.equal("spectra", "λ_l^∓ = 4π²l² ∓ 1 exactly", true, exact);
    s.equal("morse-indices", "Ind(γ-) = 1 and Ind(γ+) = 0", (1, 0), pair.indices);

    let mut crossing = Vec::new();
    let mut sz = Vec::new();
    for b in [Branch::Minus, Branch::Plus] {
        let flow = linearized_flow(LinearizedSpec::Perturbed(b)).expect("symplectic generator");
        crossing.push(rs(flow.as_ref()).ok().and_then(|v| v.to_integer()));
        sz.push(cz_from_quadratic(&perturbed_quadratic(b).0).ok());
    }
    s.equal("cz-crossing", "rs_index(Φ-) = -1 and rs_index(Φ+) = 0", vec![Some(-1), Some(0)], crossing.clone());
    s.equal("cz-sz", "cz_from_quadratic(S∓) = (-1, 0)", vec![Some(-1), Some(0)], sz);
    let relation: Vec<Option<i64>> = vec![Some(-(pair.indices.0 as i64)), Some(-(pair.indices.1 as i64))];
    s.equal("index-relation", "μ_CZ(x∓) = -Ind(γ∓)", relation, crossing);

    let counts: Vec<Option<(u64, u64)>> =
        [(1, 0.0), (2, 0.3)].iter().map(|&(k, q0)| count_connecting_orbits(k, q0).ok().map(|o| o.as_pair())).collect();
    s.equal("orbit-count", "two connecting orbits, n₂(γ-, γ+) = 0 (k = 1; k = 2, q0 = 0.3)", vec![Some((2, 0)); 2], counts.clone());
    let mw = counts[0]
        .and_then(|(c, _)| morse_witten_complex_perturbed(1, Some(c)).ok())
        .and_then(|c| homology_of_complex(&c).ok())
        .map(|h| (h.group(0).render(h.coefficients), h.group(1).render(h.coefficients)));
    s.equal("morse-witten", "Morse-Witten homology is Z2 in degrees 0 and 1", Some(("Z2".to_string(), "Z2".to_string())), mw);

    match integrate_chi(0.25, -20.0, 20.0, 4000) {
        Ok(t) => {
            s.equal(
                "chi-limits",
                "χ(0) = ¼ runs from 0 to ½",
                (Some(StationaryPoint::Zero), Some(StationaryPoint::Half)),
                t.limits,
            );
            s.bound("chi-closed-form", "RK4 trajectory matches tan πχ = e^s tan πχ0", 1e-8, t.closed_form_error());
        }
        Err(e) => s.push("chi-limits", "χ(0) = ¼ runs from 0 to ½", "ok", format!("error: {e}"), false),
    }

    let periodic = find_periodic_solutions(8);
    let constant = periodic.len() == 2
        && periodic[0].y0.abs() < 1e-6
        && (periodic[1].y0 - 0.5).abs() < 1e-6
        && periodic.iter().all(|p| p.amplitude < 1e-8 && p.p0.abs() < 1e-6);
    s.push(
        "periodic-solutions",
        "the only 1-periodic solutions are γ- and γ+ (shooting probe)",
        "y0 ∈ {0, 1/2}, constant",
        format!("{} solutions: {:?}", periodic.len(), periodic.iter().map(|p| r12(p.y0)).collect::<Vec<_>>()),
        constant,
    );

    let cylinder = ansatz_loop(1, 0.0, 0.25, 0.0, SAMPLES).and_then(|w0| solve_cylinder(1, 0.0, &w0, 15.0, 0.01));
    match cylinder {
        Ok(g) => {
            s.bound("pde-ansatz", "parabolic flow from the ansatz stays kt + q0 + χ(s)", 1e-6, g.ansatz_coherence(0.25));
            let inc = g.max_energy_increase().unwrap_or(f64::INFINITY);
            s.bound("pde-energy", "I_V(w(s, ·)) is non-increasing along the flow (max step increase)", 1e-8, inc);
            s.bound("pde-limit", "w(s, ·) → γ+ as s → ∞ (distance at s = 15)", 1e-4, g.residual);
        }
        Err(e) => s.push("pde-ansatz", "parabolic flow from the ansatz stays kt + q0 + χ(s)", "ok", format!("error: {e}"), false),
    }

    let (mut lattice, mut offset, mut drift) = (0.0f64, f64::INFINITY, 0.0f64);
    for n in 1..=3 {
        let h = FreeHamiltonian::new(FlatTorus::new(n).expect("positive dimension"));
        let u0: Vec<f64> = (0..n).map(|j| 0.3 * j as f64).collect();
        for k in -2i64..=2 {
            let v = vec![FOUR_PI_SQ * k as f64; n];
            if let Ok(o) = integrate_orbit(&h, &u0, &v, 1000) {
                lattice = lattice.max(o.closure_defect);
                drift = drift.max(o.energy_drift);
            }
            let w = vec![FOUR_PI_SQ * (k as f64 + 0.5); n];
            if let Ok(o) = integrate_orbit(&h, &u0, &w, 1000) {
                offset = offset.min(o.closure_defect);
                drift = drift.max(o.energy_drift);
            }
        }
    }
    let pendulum = integrate_orbit(&PendulumHamiltonian::new(3, 0.45), &[0.45], &[FOUR_PI_SQ * 3.0], 2000)
        .map_or(f64::INFINITY, |o| o.closure_defect);
    s.bound("orbit-closure", "free orbits with v/(2π)² ∈ Z^n close up", 1e-8, lattice.max(pendulum));
    s.push("orbit-offset", "free orbits with half-integer v/(2π)² do not close", "> 1e-1", format!("{:e}", r12(offset)), offset > 0.1);
    s.bound("energy-drift", "energy conservation along free orbits (relative drift)", 1e-9, drift);
    s
}

pub fn collect(only: Option<&str>) -> Result<AnchorReport, CliError> {
    if let Some(name) = only {
        if !SECTIONS.contains(&name) {
            return Err(CliError::Usage(format!("unknown section {name:?}; expected one of {}", SECTIONS.join(", "))));
        }
    }
    let wanted = |name: &str| only.map_or(true, |o| o == name);
    let builders: [(&str, fn() -> Section); 4] = [
        ("energy", energy_section),
        ("homology", homology_section),
        ("index", index_section),
        ("appendix", appendix_section),
    ];
    let sections: Vec<Section> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            builders.iter().filter(|(name, _)| wanted(name)).map(|(_, build)| scope.spawn(build)).collect();
        handles.into_iter().map(|h| h.join().expect("anchor section panicked")).collect()
    });
    let anchors: Vec<Anchor> = sections.into_iter().flat_map(|s| s.anchors).collect();
    let passed = anchors.iter().filter(|a| a.pass).count();
    let failed = anchors.len() - passed;
    Ok(AnchorReport { anchors, passed, failed })
}

pub fn render(report: &AnchorReport) -> String {
    let mut s = String::new();
    for a in &report.anchors {
        s.push_str(&format!(
            "{} [{}] {}: {} (expected {}, observed {})\n",
            if a.pass { "PASS" } else { "FAIL" },
            a.section,
            a.id,
            a.claim,
            a.expected,
            a.observed
        ));
    }
    s.push_str(&format!("{} passed, {} failed\n", report.passed, report.failed));
    s
}

pub fn run(json: Option<&Path>, only: Option<&str>) -> Result<bool, CliError> {
    let report = collect(only)?;
    emit(&render(&report), None)?;
    if let Some(path) = json {
        emit(&to_json(&report)?, Some(path))?;
    }
    Ok(report.failed == 0)
}
