//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use circulant_schur::catalog::{
    brute_force_srings, enumerate_srings, example12, schurity_sweep, Enumerator, Example12Params,
    BRUTE_FORCE_LIMIT,
};
use circulant_schur::perm::PermGroup;
use circulant_schur::scheme::{self, nonschurity_criterion, AutOptions};
use circulant_schur::structure::{self, canonical_gwp, ext, proj_classes, singular_classes};
use circulant_schur::zn::{self, is_prime};
use circulant_schur::{Result, SRing, Section};

type Outcome = Result<(bool, String)>;

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn is_sym(g: &PermGroup) -> bool {
    g.order() == factorial(g.degree())
}

fn is_hol(g: &PermGroup) -> bool {
    let h = PermGroup::holomorph(g.degree());
    g.is_subgroup_of(&h) && g.order() == h.order()
}

fn catalog_upto(limit: usize) -> Result<Vec<SRing>> {
    let mut en = Enumerator::default();
    let mut out = Vec::new();
    for n in 2..=limit {
        out.extend(en.catalog(n)?.rings());
    }
    Ok(out)
}

fn z9() -> SRing {
    SRing::validate(9, vec![vec![0], vec![3, 6], vec![1, 2, 4, 5, 7, 8]]).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut total = 0;
    for n in 2..=BRUTE_FORCE_LIMIT {
        let e = enumerate_srings(n)?;
        let b = brute_force_srings(n)?;
        if !e.same_rings(&b) {
            return Ok((false, format!("n = {n}: enumerated {} vs exhaustive {}", e.len(), b.len())));
        }
        total += e.len();
    }
    Ok((true, format!("{total} rings over n = 2..{BRUTE_FORCE_LIMIT}")))
}

fn small_omega_schurian() -> Outcome {
    let ns: Vec<usize> = (2..=75).filter(|&n| zn::omega(n) <= 3).collect();
    let reports = schurity_sweep(&ns, AutOptions::default(), 0)?;
    let entries: usize = reports.iter().map(|r| r.entries).sum();
    let bad: Vec<usize> = reports.iter().filter(|r| !r.nonschurian.is_empty()).map(|r| r.n).collect();
    Ok((bad.is_empty(), format!("{entries} rings over {} moduli, non-schurian at {bad:?}", ns.len())))
}

fn minimal_nonschurian_example() -> Outcome {
    let opts = AutOptions::default();
    let ex = example12(Example12Params::minimal())?;
    let lattice = ex.ring.subgroup_lattice().orders;
    let lattice_ok = lattice == [1, 5, 11, 25, 55, 143, 275, 715, 3575];
    let section_ok = (ex.section.u, ex.section.l) == (275, 11);
    let cert = nonschurity_criterion(&ex.ring, ex.section, opts, 1_000_000)?;
    let control = example12(Example12Params { distinct: false, ..Example12Params::minimal() })?;
    let neg = nonschurity_criterion(&control.ring, control.section, opts, 1_000_000)?;
    let ok = lattice_ok && section_ok && cert.holds && !neg.holds;
    Ok((
        ok,
        format!(
            "rank {}, lattice ok {lattice_ok}, certificate {} (2-orbits {} vs {}), control {}",
            ex.ring.rank(),
            cert.holds,
            cert.witness.intersection_two_orbits,
            cert.witness.section_two_orbits,
            neg.holds
        ),
    ))
}

fn primitive_class_dichotomy(rings: &[SRing]) -> Outcome {
    let opts = AutOptions::default();
    let results: Vec<Result<(usize, Option<String>)>> = rings
        .par_iter()
        .map(|a| {
            let aut = scheme::aut_group_with(a, opts)?.group;
            let mut checked = 0;
            for c in proj_classes(a)?.into_iter().filter(|c| c.primitive) {
                for &s in &c.sections {
                    let ind = aut.induced_on_section(s)?;
                    let first = c.singular && is_sym(&ind);
                    let second = is_prime(c.order) && ind.is_subgroup_of(&PermGroup::holomorph(c.order));
                    checked += 1;
                    if !(first || second) {
                        return Ok((checked, Some(format!("{a} at {s:?}"))));
                    }
                }
            }
            Ok((checked, None))
        })
        .collect();
    let mut sections = 0;
    for r in results {
        let (k, bad) = r?;
        sections += k;
        if let Some(b) = bad {
            return Ok((false, b));
        }
    }
    Ok((true, format!("{sections} primitive sections over {} rings", rings.len())))
}

fn class_sections(cs: &[structure::ProjClass]) -> BTreeSet<Vec<Section>> {
    cs.iter().map(|c| c.sections.clone()).collect()
}

fn ext_reduces_singular(rings: &[SRing]) -> Outcome {
    let mut instances = 0;
    let mut with_z9 = vec![z9()];
    with_z9.extend(rings.iter().cloned());
    for a in &with_z9 {
        let sing = singular_classes(a)?;
        for c in sing.iter().filter(|c| is_prime(c.order)) {
            let a2 = ext(a, c, &SRing::group_ring(c.order))?;
            let same_lattice = a.subgroup_lattice() == a2.subgroup_lattice();
            let mut expected = class_sections(&sing);
            expected.remove(&c.sections);
            let got = class_sections(&singular_classes(&a2)?);
            if !same_lattice || got != expected {
                return Ok((false, format!("{a} at {:?}", c.s_min)));
            }
            instances += 1;
        }
    }
    Ok((instances >= 11, format!("{instances} extensions including Z_9")))
}

fn resolve_matches_aut(rings: &[SRing]) -> Outcome {
    let opts = AutOptions::default();
    let results: Vec<Result<Option<String>>> = rings
        .par_iter()
        .map(|a| {
            let sing = singular_classes(a)?;
            if sing.is_empty() || !scheme::is_schurian_with(a, opts)? {
                return Ok(None);
            }
            let res = structure::resolve(a, opts)?;
            if res.verified != Some(true) {
                return Ok(Some(format!("{a}: not 2-equivalent")));
            }
            for c in &sing {
                for &s in &c.sections {
                    let ind = res.group.induced_on_section(s)?;
                    let ok = if is_prime(c.order) { is_hol(&ind) } else { is_sym(&ind) };
                    if !ok {
                        return Ok(Some(format!("{a}: induced action at {s:?}")));
                    }
                }
            }
            Ok(Some(String::new()))
        })
        .collect();
    let mut count = 0;
    for r in results {
        match r? {
            Some(msg) if !msg.is_empty() => return Ok((false, msg)),
            Some(_) => count += 1,
            None => {}
        }
    }
    Ok((count > 0, format!("{count} schurian rings with singular classes")))
}

fn random_compatible_pair(rng: &mut StdRng) -> Option<(PermGroup, PermGroup, Section)> {
    let n = rng.gen_range(4..=48);
    let ds = zn::divisors(n);
    let u = *ds.choose(rng)?;
    let l = *zn::divisors(u).choose(rng)?;
    if u == n || l == 1 {
        return None;
    }
    let q = n / l;
    let m = u / l;
    if rng.gen_bool(0.25) && u <= 8 && q <= 8 && m <= 6 {
        return Some((PermGroup::symmetric(u), PermGroup::symmetric(q), Section { n, u, l }));
    }
    let reduce = |k: &[usize]| -> BTreeSet<usize> { k.iter().map(|x| x % m).collect() };
    let k1 = zn::unit_subgroups(u).choose(rng)?.clone();
    let image = reduce(&k1);
    let matches: Vec<Vec<usize>> =
        zn::unit_subgroups(q).into_iter().filter(|k2| reduce(k2) == image).collect();
    let k2 = matches.choose(rng)?.clone();
    Some((PermGroup::affine(u, &k1), PermGroup::affine(q, &k2), Section { n, u, l }))
}

fn canonical_gwp_structure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut done = 0;
    let mut attempts = 0;
    while done < 20 {
        attempts += 1;
        if attempts > 100_000 {
            return Ok((false, format!("only {done} compatible pairs found")));
        }
        let Some((du, d0, sec)) = random_compatible_pair(&mut rng) else { continue };
        let Section { n, u, l } = sec;
        let g = canonical_gwp(&du, &d0, sec)?;
        let projects = g.induced_on_section(Section::new(n, n, l)?)?.equals(&d0);
        let restricts = g.induced_on_section(Section::new(n, u, 1)?)?.equals(&du);
        let on_blocks = du.induced_on_section(Section::new(u, u, l)?)?.order();
        let kernel = du.order() / on_blocks;
        let expected = d0.order() * num_traits_pow(&kernel, n / u);
        if !(projects && restricts && g.order() == expected) {
            return Ok((false, format!("section {sec:?}: project {projects}, restrict {restricts}, order {} vs {expected}", g.order())));
        }
        done += 1;
    }
    Ok((true, format!("{done} pairs after {attempts} draws")))
}

fn num_traits_pow(b: &BigUint, e: usize) -> BigUint {
    (0..e).fold(BigUint::from(1u32), |acc, _| acc * b)
}

fn trivial_radical_schurian(rings: &[SRing]) -> Outcome {
    let opts = AutOptions::default();
    let results: Vec<Result<Option<bool>>> = rings
        .par_iter()
        .map(|a| {
            if a.radical()?.d != 1 {
                return Ok(None);
            }
            Ok(Some(scheme::is_schurian_with(a, opts)?))
        })
        .collect();
    let mut count = 0;
    for r in results {
        match r? {
            Some(false) => return Ok((false, "non-schurian ring with trivial radical".into())),
            Some(true) => count += 1,
            None => {}
        }
    }
    Ok((true, format!("{count} rings with trivial radical")))
}

fn main() {
    let rings = catalog_upto(60).expect("catalog up to 60");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("enumeration equals exhaustive search, n = 2..13", Box::new(oracle_equivalence)),
        ("every ring with Omega(n) <= 3, n <= 75 is schurian", Box::new(small_omega_schurian)),
        ("minimal non-schurian example over Z_3575", Box::new(minimal_nonschurian_example)),
        ("primitive class dichotomy, n <= 60", Box::new(|| primitive_class_dichotomy(&rings))),
        ("extension removes exactly the extended singular class", Box::new(|| ext_reduces_singular(&rings))),
        ("resolution is 2-equivalent with Hol/Sym sections, n <= 60", Box::new(|| resolve_matches_aut(&rings))),
        ("canonical gwp projects, restricts and has the product order", Box::new(canonical_gwp_structure)),
        ("trivial radical implies schurian, n <= 60", Box::new(|| trivial_radical_schurian(&rings))),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {detail} ({:.1?})", i + 1, t.elapsed());
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
