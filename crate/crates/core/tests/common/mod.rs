#![allow(dead_code)]

use milfib_core::arrangement::{
    build_lattice, generic_section, named_arrangement, Arrangement, IncidenceLattice,
};
use milfib_core::fixtures::{braid_c4, SECTION_SEED};
use milfib_core::linalg::{nullspace, rank, Matrix};
use milfib_core::milnor::{
    cokernel_pair, full_spectrum, grf_dims, grf_dims_with_charts, ideal_constraints,
    monomial_basis, order_at, precheck_vanishing, rho_tilde, ChartPolicy,
};
use milfib_core::resonance::{alpha_components, aomoto_h1, check_condition_02, weights_from_k_i};
use milfib_core::CycloNumber;
use proptest::prelude::*;

pub const FIXTURE_NAMES: [&str; 6] = [
    "braid",
    "pappus-dual",
    "ex-3-1-iii",
    "ceva3",
    "hesse",
    "braid-c4",
];

pub fn fixture(name: &str) -> (Arrangement, IncidenceLattice) {
    let arr = if name == "braid-c4" {
        generic_section(&braid_c4(), SECTION_SEED).unwrap().0
    } else {
        named_arrangement(name).unwrap()
    };
    let lat = build_lattice(&arr).unwrap();
    (arr, lat)
}

/// The 13 lines of ℙ² with coefficients in {-1, 0, 1}, one per ± pair.
pub fn small_lines() -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                let v = [a, b, c];
                let first = v.iter().copied().find(|&x| x != 0);
                if first == Some(1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Random essential arrangements of 3 to 8 lines drawn from `small_lines`.
pub fn random_arrangement() -> impl Strategy<Value = Arrangement> {
    proptest::sample::subsequence(small_lines(), 3..=8).prop_filter_map("not essential", |lines| {
        Arrangement::from_int_lines("random", &lines).ok()
    })
}

/// Dimension of the degree-`deg` polynomials whose partial derivatives of
/// order below s_y(k) all vanish at every y ∈ Σ.
pub fn ideal_dim_by_derivatives(lat: &IncidenceLattice, d: usize, k: usize, deg: i64) -> usize {
    let monomials = monomial_basis(deg);
    let mut rows = Vec::new();
    for y in lat.sigma() {
        let coords = y.point.coords();
        for n in 0..order_at(y.multiplicity(), k, d).max(0) {
            for beta in monomial_basis(n) {
                let row = monomials
                    .iter()
                    .map(|e| {
                        if (0..3).any(|i| beta[i] > e[i]) {
                            return CycloNumber::zero(1);
                        }
                        (0..3).fold(CycloNumber::one(1), |acc, i| {
                            let falling: i64 = (0..beta[i]).map(|j| (e[i] - j) as i64).product();
                            &(&acc * &CycloNumber::from_int(falling, 1))
                                * &coords[i].pow(e[i] - beta[i])
                        })
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    monomials.len() - rank(&Matrix::from_rows(rows, monomials.len()))
}

/// A concrete choice of (k, I, scale, distinguished line, chart seed) for one property run.
#[derive(Clone, Debug)]
pub struct Probe {
    pub k: usize,
    pub subset: Vec<usize>,
    pub scale: i64,
    pub distinguished: usize,
    pub chart_seed: u64,
}

pub fn probe_for(d: usize) -> impl Strategy<Value = Probe> {
    (1..d).prop_flat_map(move |k| {
        (
            Just(k),
            proptest::sample::subsequence((0..d).collect::<Vec<_>>(), k),
            prop_oneof![-5i64..=-1, 1i64..=5],
            0..d,
            any::<u64>(),
        )
            .prop_map(|(k, subset, scale, distinguished, chart_seed)| Probe {
                k,
                subset,
                scale,
                distinguished,
                chart_seed,
            })
    })
}

fn random_charts(lat: &IncidenceLattice, seed: u64) -> ChartPolicy {
    let mut s = seed;
    ChartPolicy::Explicit(
        lat.sigma()
            .map(|y| {
                let valid: Vec<usize> =
                    (0..3).filter(|&c| !y.point.coords()[c].is_zero()).collect();
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                valid[(s >> 33) as usize % valid.len()]
            })
            .collect(),
    )
}

/// Labels (a) through (i) of the property suite, each paired with a failure message if any.
pub fn check_properties(
    arr: &Arrangement,
    lat: &IncidenceLattice,
    p: &Probe,
) -> Vec<(char, Option<String>)> {
    let d = arr.degree();
    let k = p.k;
    let mut out = Vec::new();
    let spectrum = full_spectrum(arr, lat).unwrap();
    let b1 = spectrum[k - 1].b1;

    // (a) cokernels of ρ and ρ̃ agree
    let pairs: Vec<(usize, usize)> = (1..d)
        .map(|k| cokernel_pair(arr, lat, k, &ChartPolicy::default()).unwrap())
        .collect();
    out.push((
        'a',
        pairs
            .iter()
            .position(|(x, y)| x != y)
            .map(|i| format!("k = {}: {:?}", i + 1, pairs[i])),
    ));

    // (b) conjugation symmetry
    let other = &spectrum[d - k - 1];
    let ok = spectrum[k - 1].grf0 == other.grf1 && b1 == other.b1;
    out.push(('b', (!ok).then(|| format!("k = {k} vs {}", d - k))));

    // (c) Aomoto dimension under scaling and a change of distinguished line
    let w = weights_from_k_i(d, k, &p.subset).unwrap();
    let h = aomoto_h1(arr, lat, &w, d - 1).unwrap();
    let scaled = aomoto_h1(
        arr,
        lat,
        &w.scaled(&CycloNumber::from_int(p.scale, 1)),
        d - 1,
    )
    .unwrap();
    let moved = aomoto_h1(arr, lat, &w, p.distinguished).unwrap();
    let zeta_scaled = aomoto_h1(arr, lat, &w.scaled(&CycloNumber::zeta(3)), d - 1).unwrap();
    let ok = h == scaled && h == moved && h == zeta_scaled;
    out.push((
        'c',
        (!ok).then(|| format!("{h} {scaled} {moved} {zeta_scaled}")),
    ));

    // (d) Aomoto ≤ b₁, with equality under the residue condition
    let mut msg = (h > b1).then(|| format!("aomoto {h} > b1 {b1}"));
    let low = k.min(d - k);
    let (low_subset, low_h) = if low == k {
        (p.subset.clone(), h)
    } else {
        let complement: Vec<usize> = (0..d).filter(|i| !p.subset.contains(i)).collect();
        let wc = weights_from_k_i(d, low, &complement).unwrap();
        (complement, aomoto_h1(arr, lat, &wc, d - 1).unwrap())
    };
    if let Ok(v) = check_condition_02(lat, d, low, &low_subset) {
        if v.branch == Some(milfib_core::resonance::Branch::First) && low_h != b1 {
            msg = Some(format!(
                "certified at k = {low} but aomoto {low_h} ≠ b1 {b1}"
            ));
        }
    }
    out.push(('d', msg));

    // (e) failed pre-checks force b₁ = 0
    let (p1, p2) = precheck_vanishing(lat, d, k).unwrap();
    out.push((
        'e',
        (!(p1 && p2) && b1 != 0).then(|| format!("pre-check ({p1}, {p2}) with b1 {b1}")),
    ));

    // (f) Aomoto ≤ max(r' - 2, 0)
    let r = alpha_components(lat, &w, d - 1).unwrap().len();
    out.push((
        'f',
        (h > r.saturating_sub(2)).then(|| format!("aomoto {h} with {r} components")),
    ));

    // (g) surjectivity above 2d/3 when every multiple point is triple
    let triple = lat.sigma().all(|y| y.multiplicity() == 3);
    let msg = if triple && 3 * k > 2 * d {
        let m = rho_tilde(arr, lat, k, &ChartPolicy::default()).unwrap();
        (rank(&m) != m.rows()).then(|| format!("rank {} < {} rows", rank(&m), m.rows()))
    } else {
        None
    };
    out.push(('g', msg));

    // (h) ideal dimension oracle
    let deg = k as i64 - 3;
    let msg = if (0..=4).contains(&deg) {
        let c = ideal_constraints(arr, lat, k, &ChartPolicy::default()).unwrap();
        let (a, b) = (
            nullspace(&c).len(),
            ideal_dim_by_derivatives(lat, d, k, deg),
        );
        (a != b).then(|| format!("jets {a} vs derivatives {b}"))
    } else {
        None
    };
    out.push(('h', msg));

    // (i) chart independence
    let charts = random_charts(lat, p.chart_seed);
    let a = grf_dims(arr, lat, k).unwrap();
    let b = grf_dims_with_charts(arr, lat, k, &charts).unwrap();
    out.push(('i', (a != b).then(|| format!("{a:?} vs {b:?}"))));
    out
}
