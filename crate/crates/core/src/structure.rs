//! Projective classes, isolated pairs, singular classes, extensions, and
//! the automorphism groups built from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{self, Lifter, Perm, PermGroup, DEFAULT_LIFT_THRESHOLD};
use crate::scheme::{self, AutOptions};
use crate::sring::SRing;
use crate::zn::{is_prime, Section};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjClass {
    pub sections: Vec<Section>,
    pub s_min: Section,
    pub s_max: Section,
    pub order: usize,
    pub rank: usize,
    pub primitive: bool,
    /// Filled in by [`ProjClass::compute_normal`]; needs an automorphism search.
    pub normal: Option<bool>,
    pub isolated: bool,
    pub singular: bool,
}

/// Report form: `{"order", "s_min": [u,l], "s_max": [u,l], "rank", "primitive", "singular"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub order: usize,
    pub s_min: [usize; 2],
    pub s_max: [usize; 2],
    pub rank: usize,
    pub primitive: bool,
    pub singular: bool,
    pub isolated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<bool>,
    pub members: usize,
}

impl ProjClass {
    pub fn report(&self) -> ClassReport {
        ClassReport {
            order: self.order,
            s_min: [self.s_min.u, self.s_min.l],
            s_max: [self.s_max.u, self.s_max.l],
            rank: self.rank,
            primitive: self.primitive,
            singular: self.singular,
            isolated: self.isolated,
            normal: self.normal,
            members: self.sections.len(),
        }
    }

    pub fn contains(&self, s: &Section) -> bool {
        self.sections.binary_search(s).is_ok()
    }

    pub fn compute_normal(&mut self, a: &SRing, opts: AutOptions) -> Result<bool> {
        let v = scheme::is_normal_with(&a.section_ring(self.s_min)?, opts)?;
        self.normal = Some(v);
        Ok(v)
    }
}

/// All A-sections `U/L` (both `U` and `L` A-subgroups, `L <= U`).
pub fn a_sections(a: &SRing) -> Vec<Section> {
    let n = a.n();
    let lattice = a.subgroup_lattice().orders;
    let mut out = Vec::new();
    for &u in &lattice {
        for &l in &lattice {
            if u % l == 0 {
                out.push(Section { n, u, l });
            }
        }
    }
    out.sort();
    out
}

pub fn proj_classes(a: &SRing) -> Result<Vec<ProjClass>> {
    let secs = a_sections(a);
    let k = secs.len();
    let mut uf = perm::UnionFind::new(k);
    for i in 0..k {
        for j in 0..k {
            if i != j && secs[i].is_multiple_of(&secs[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Section>> = BTreeMap::new();
    for (i, s) in secs.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(*s);
    }
    let mut out = Vec::new();
    for (_, mut members) in groups {
        members.sort();
        let s_min = *members
            .iter()
            .find(|s| members.iter().all(|t| t.is_multiple_of(s)))
            .ok_or_else(|| Error::Internal(format!("no smallest section in {members:?}")))?;
        let s_max = *members
            .iter()
            .find(|t| members.iter().all(|s| t.is_multiple_of(s)))
            .ok_or_else(|| Error::Internal(format!("no greatest section in {members:?}")))?;
        let ring = a.section_ring(s_min)?;
        let order = s_min.order();
        let primitive = order > 1 && ring.subgroup_lattice().orders.len() == 2;
        let isolated = order > 1 && is_isolated_pair(a, s_min, s_max)?;
        let singular = isolated && ring.rank() == 2 && order > 2;
        out.push(ProjClass {
            sections: members,
            s_min,
            s_max,
            order,
            rank: ring.rank(),
            primitive,
            normal: None,
            isolated,
            singular,
        });
    }
    out.sort_by_key(|c| (c.order, c.s_min));
    Ok(out)
}

/// Isolation of `S = L1/L0` and its multiple `T = U1/U0`: both S-conditions hold
/// and the ring on `U1/L0` is the tensor product of those on `L1/L0` and `U0/L0`.
pub fn is_isolated_pair(a: &SRing, s: Section, t: Section) -> Result<bool> {
    if !t.is_multiple_of(&s) {
        return Ok(false);
    }
    let (l1, l0, u1, u0) = (s.u, s.l, t.u, t.l);
    if !(a.satisfies_s_condition(u0, l0) && a.satisfies_s_condition(u1, l1)) {
        return Ok(false);
    }
    let n = a.n();
    let whole = a.section_ring(Section::new(n, u1, l0)?)?;
    let left = a.section_ring(Section::new(n, l1, l0)?)?;
    let right = a.section_ring(Section::new(n, u0, l0)?)?;
    Ok(SRing::tensor_on_subgroups(&left, &right)? == whole)
}

pub fn isolated_pair(a: &SRing, c: &ProjClass) -> Result<Option<(Section, Section)>> {
    if c.order <= 1 {
        return Ok(None);
    }
    Ok(is_isolated_pair(a, c.s_min, c.s_max)?.then_some((c.s_min, c.s_max)))
}

/// Every pair of members satisfying the isolation conditions.
pub fn isolated_pairs_exhaustive(a: &SRing, c: &ProjClass) -> Result<Vec<(Section, Section)>> {
    let mut out = Vec::new();
    for &s in &c.sections {
        for &t in &c.sections {
            if is_isolated_pair(a, s, t)? {
                out.push((s, t));
            }
        }
    }
    Ok(out)
}

pub fn singular_classes(a: &SRing) -> Result<Vec<ProjClass>> {
    Ok(proj_classes(a)?.into_iter().filter(|c| c.singular).collect())
}

/// Replaces the section ring of an isolated class by a finer ring `b`.
pub fn ext(a: &SRing, c: &ProjClass, b: &SRing) -> Result<SRing> {
    if c.order <= 1 || !is_isolated_pair(a, c.s_min, c.s_max)? {
        return Err(Error::NotIsolated);
    }
    let n = a.n();
    let (l1, l0, u1, u0) = (c.s_min.u, c.s_min.l, c.s_max.u, c.s_max.l);
    let a_s = a.section_ring(c.s_min)?;
    if b.n() != a_s.n() || !a_s.is_coarsening_of(b) {
        return Err(Error::NotARefinement);
    }
    let a_u0 = a.restriction(u0)?;
    let a_u0l0 = a.section_ring(Section::new(n, u0, l0)?)?;
    let a_gl1 = a.quotient(l1)?;
    let t = SRing::tensor_on_subgroups(b, &a_u0l0)?;
    let a1 = SRing::generalized_wreath(&a_u0, &t, Section::new(u1, u0, l0)?)?;
    let a2 = SRing::generalized_wreath(&t, &a_gl1, Section::new(n / l0, u1 / l0, l1 / l0)?)?;
    SRing::generalized_wreath(&a1, &a2, Section::new(n, u1, l0)?)
}

#[derive(Debug, Clone)]
pub struct GwrSpec {
    pub s_min: Section,
    pub s_max: Section,
    pub m_group: PermGroup,
}

/// `Gwr(S, T, M)`: supported on `U1`, identity elsewhere.
pub fn gwr_group(n: usize, spec: &GwrSpec) -> Result<PermGroup> {
    let (s, t) = (spec.s_min, spec.s_max);
    if s.n != n || t.n != n || !t.is_multiple_of(&s) {
        return Err(Error::InvalidParameters(format!("{t:?} is not a multiple of {s:?} in Z_{n}")));
    }
    let m = s.order();
    if spec.m_group.degree() != m {
        return Err(Error::DegreeMismatch(m, spec.m_group.degree()));
    }
    if spec.m_group.orbits().len() != 1 {
        return Err(Error::NotTransitive);
    }
    let (l1, l0, u1, u0) = (s.u, s.l, t.u, t.l);
    let l1_step = n / l1;
    let u0_step = n / u0;
    let l0_step = n / l0;
    let u1_step = n / u1;
    // U0-coset of each element of U1, as the index k of the coset a_k + U0, a_k = k n/l1
    let mut coset_of = vec![usize::MAX; n];
    for k in 0..m {
        let a = k * l1_step;
        for j in 0..u0 {
            coset_of[(a + j * u0_step) % n] = k;
        }
    }
    let mut gens = Vec::new();
    for mg in spec.m_group.generators() {
        let mut images: Vec<usize> = (0..n).collect();
        for x in (0..n).step_by(u1_step) {
            let k = coset_of[x];
            let shift = (mg.apply(k) * l1_step + n - k * l1_step) % n % l0_step;
            images[x] = (x + shift) % n;
        }
        gens.push(Perm::from_images(images)?);
    }
    if l0 > 1 {
        for k in 0..m {
            let mut images: Vec<usize> = (0..n).collect();
            for x in (0..n).step_by(u1_step) {
                if coset_of[x] == k {
                    images[x] = (x + l0_step) % n;
                }
            }
            gens.push(Perm::from_images(images)?);
        }
    }
    PermGroup::new(n, gens)
}

/// Canonical generalized wreath product of `du` (on `Z_u`) by `d0` (on `Z_{n/l}`).
pub fn canonical_gwp(du: &PermGroup, d0: &PermGroup, sec: Section) -> Result<PermGroup> {
    canonical_gwp_with(du, d0, sec, DEFAULT_LIFT_THRESHOLD)
}

pub fn canonical_gwp_with(du: &PermGroup, d0: &PermGroup, sec: Section, threshold: usize) -> Result<PermGroup> {
    let Section { n, u, l } = sec;
    let q = n / l;
    let m = u / l;
    if du.degree() != u || d0.degree() != q {
        return Err(Error::ShapeMismatch(format!(
            "groups of degree {} and {} for the section {u}/{l} of Z_{n}",
            du.degree(),
            d0.degree()
        )));
    }
    if !du.contains(&perm::translation(u, 1 % u.max(1))) || !d0.contains(&perm::translation(q, 1 % q.max(1))) {
        return Err(Error::InvalidParameters("both groups must contain the translations".into()));
    }
    let su = Section::new(u, u, l)?;
    let s0 = Section::new(q, m, 1)?;
    let ind_u = du.induced_on_section(su)?;
    let ind_0 = d0.induced_on_section(s0)?;
    if !ind_u.equals(&ind_0) {
        return Err(Error::InducedMismatch(ind_u.order().to_string(), ind_0.order().to_string()));
    }
    let step = n / u;
    let blocks = n / u;
    let mut gens: Vec<Perm> = Vec::new();
    // kernel part, copied to every U-coset
    let kernel = du.kernel_on_blocks(&perm::coset_blocks(u, l))?;
    for r in 0..blocks {
        for k in kernel.generators() {
            let mut images: Vec<usize> = (0..n).collect();
            for y in 0..u {
                images[r + y * step] = r + k.apply(y) * step;
            }
            gens.push(Perm::from_images(images)?);
        }
    }
    // lifts of the generators of d0
    let lifter = Lifter::new(du, su, threshold)?;
    for g0 in d0.generators() {
        let mut images = vec![0usize; n];
        for r in 0..blocks {
            let r2 = g0.apply(r) % step;
            let tau = Perm::from_fn(m, |k| {
                let y = g0.apply((r + k * step) % q);
                ((y + q - r2) % q / step) % m
            });
            let d = lifter.lift(&tau)?;
            for y in 0..u {
                images[r + y * step] = r2 + d.apply(y) * step;
            }
        }
        gens.push(Perm::from_images(images)?);
    }
    PermGroup::new(n, gens)
}

#[derive(Debug)]
pub struct Resolution {
    pub group: PermGroup,
    /// `Some(true)` if compared with the automorphism group and found 2-equivalent,
    /// `None` if the comparison was skipped.
    pub verified: Option<bool>,
    pub extended: Vec<Section>,
}

/// A group `G_right <= Γ <= Aut(A)`-sized resolution of the prime singular classes.
pub fn resolve(a: &SRing, opts: AutOptions) -> Result<Resolution> {
    let mut extended = Vec::new();
    let group = resolve_inner(a, opts, &mut extended)?;
    let verified = if a.n() <= opts.bound {
        let aut = scheme::aut_group_with(a, opts)?;
        Some(group.two_equivalent(&aut.group)?)
    } else {
        None
    };
    Ok(Resolution { group, verified, extended })
}

fn resolve_inner(a: &SRing, opts: AutOptions, extended: &mut Vec<Section>) -> Result<PermGroup> {
    let chosen = singular_classes(a)?
        .into_iter()
        .filter(|c| is_prime(c.order))
        .min_by_key(|c| (c.order, c.s_min.u, c.s_min.l));
    let Some(c) = chosen else {
        return Ok(scheme::aut_group_with(a, opts)?.group);
    };
    extended.push(c.s_min);
    let a2 = ext(a, &c, &SRing::group_ring(c.order))?;
    let inner = resolve_inner(&a2, opts, extended)?;
    let spec = GwrSpec { s_min: c.s_min, s_max: c.s_max, m_group: PermGroup::holomorph(c.order) };
    inner.join(&gwr_group(a.n(), &spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn;
    use num_bigint::BigUint;

    fn z9() -> SRing {
        SRing::validate(9, vec![vec![0], vec![3, 6], vec![1, 2, 4, 5, 7, 8]]).unwrap()
    }

    fn sec(n: usize, u: usize, l: usize) -> Section {
        Section::new(n, u, l).unwrap()
    }

    #[test]
    fn classes_of_prime_group_ring() {
        let cs = proj_classes(&SRing::group_ring(7)).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].order, 1);
        assert_eq!(cs[1].sections, vec![sec(7, 7, 1)]);
    }

    #[test]
    fn z9_classes() {
        let cs = proj_classes(&z9()).unwrap();
        let order3: Vec<&ProjClass> = cs.iter().filter(|c| c.order == 3).collect();
        assert_eq!(order3.len(), 2);
        assert_eq!(order3[0].sections, vec![sec(9, 3, 1)]);
        assert_eq!(order3[1].sections, vec![sec(9, 9, 3)]);
        let sing = singular_classes(&z9()).unwrap();
        assert_eq!(sing.len(), 2);
        assert_eq!(isolated_pair(&z9(), order3[0]).unwrap(), Some((sec(9, 3, 1), sec(9, 3, 1))));
    }

    #[test]
    fn cyc8_classes_match_divisor_arithmetic() {
        let a = SRing::cyclotomic(8, &[3]).unwrap();
        let cs = proj_classes(&a).unwrap();
        let c = cs.iter().find(|c| c.contains(&sec(8, 4, 2))).unwrap();
        // (4,2) and (8,4) are not multiples of each other; (2,1) is a multiple of nothing else
        assert_eq!(c.sections, vec![sec(8, 4, 2)]);
        let c = cs.iter().find(|c| c.contains(&sec(8, 2, 1))).unwrap();
        assert_eq!(c.sections, vec![sec(8, 2, 1)]);
        let trivial = cs.iter().find(|c| c.order == 1).unwrap();
        assert_eq!(trivial.sections.len(), 4);
    }

    #[test]
    fn classes_have_extremes_and_equal_ranks() {
        for n in [12usize, 30, 36] {
            for k in zn::unit_subgroups(n) {
                let a = SRing::cyclotomic(n, &k).unwrap();
                for c in proj_classes(&a).unwrap() {
                    for s in &c.sections {
                        assert!(s.is_multiple_of(&c.s_min));
                        assert!(c.s_max.is_multiple_of(s));
                        assert_eq!(a.section_ring(*s).unwrap().rank(), c.rank);
                        assert_eq!(s.order(), c.order);
                    }
                }
            }
        }
    }

    #[test]
    fn group_rings_have_no_singular_classes() {
        for n in 2..30 {
            assert!(singular_classes(&SRing::group_ring(n)).unwrap().is_empty());
        }
    }

    #[test]
    fn ext_examples() {
        let a = z9();
        let c = proj_classes(&a).unwrap().into_iter().find(|c| c.s_min == sec(9, 3, 1)).unwrap();
        let a1 = ext(&a, &c, &SRing::group_ring(3)).unwrap();
        assert_eq!(a1.basic_sets(), &[vec![0], vec![1, 2, 4, 5, 7, 8], vec![3], vec![6]]);
        assert_eq!(ext(&a, &c, &SRing::rank2(3)).unwrap(), a);
        let c2 = singular_classes(&a1).unwrap();
        assert_eq!(c2.len(), 1);
        let a2 = ext(&a1, &c2[0], &SRing::group_ring(3)).unwrap();
        assert_eq!(a2.basic_sets(), &[vec![0], vec![1, 4, 7], vec![2, 5, 8], vec![3], vec![6]]);
        assert!(matches!(ext(&a, &c, &SRing::group_ring(2)), Err(Error::NotARefinement)));
    }

    #[test]
    fn gwr_examples() {
        let spec = GwrSpec { s_min: sec(15, 5, 1), s_max: sec(15, 5, 1), m_group: PermGroup::holomorph(5) };
        let g = gwr_group(15, &spec).unwrap();
        assert_eq!(g.order(), BigUint::from(20u32));
        assert!(g.generators().iter().all(|p| (0..15).filter(|x| x % 3 != 0).all(|x| p.apply(x) == x)));
        // identity M over a class with L0 of order 3: kernel part only
        let spec = GwrSpec {
            s_min: sec(9, 9, 3),
            s_max: sec(9, 9, 3),
            m_group: PermGroup::translations(3),
        };
        assert_eq!(gwr_group(9, &spec).unwrap().order(), BigUint::from(3u32 * 27));
        let a1 = ext(&z9(), &proj_classes(&z9()).unwrap()[1], &SRing::group_ring(3)).unwrap();
        let spec = GwrSpec { s_min: sec(9, 9, 3), s_max: sec(9, 9, 3), m_group: PermGroup::holomorph(3) };
        let g = gwr_group(9, &spec).unwrap();
        assert_eq!(g.order(), BigUint::from(6u32 * 27));
        let scheme = scheme::cayley_scheme(&a1);
        assert!(g.generators().iter().all(|p| scheme.preserves(p)));
        let bad = GwrSpec { s_min: sec(9, 9, 3), s_max: sec(9, 9, 3), m_group: PermGroup::trivial(3) };
        assert!(matches!(gwr_group(9, &bad), Err(Error::NotTransitive)));
    }

    #[test]
    fn canonical_gwp_examples() {
        let s2 = PermGroup::symmetric(2);
        let g = canonical_gwp(&s2, &s2, sec(4, 2, 2)).unwrap();
        assert_eq!(g.order(), BigUint::from(8u32));
        let s3 = PermGroup::symmetric(3);
        let g = canonical_gwp(&s3, &s3, sec(9, 3, 3)).unwrap();
        assert_eq!(g.order(), BigUint::from(1296u32));
        let aut = scheme::aut_group(&z9()).unwrap();
        assert!(g.equals(&aut.group));
        let t = canonical_gwp(&PermGroup::translations(6), &PermGroup::translations(10), sec(30, 6, 3)).unwrap();
        // contains the translations, with one kernel copy per U-coset
        assert!(PermGroup::translations(30).is_subgroup_of(&t));
        assert_eq!(t.order(), BigUint::from(10u32 * 3u32.pow(5)));
        assert!(matches!(
            canonical_gwp(&PermGroup::translations(3), &PermGroup::symmetric(3), sec(9, 3, 1)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            canonical_gwp(&PermGroup::translations(3), &PermGroup::symmetric(3), sec(3, 3, 1)),
            Err(Error::InducedMismatch(_, _))
        ));
    }

    #[test]
    fn resolve_z9() {
        let r = resolve(&z9(), AutOptions::default()).unwrap();
        assert_eq!(r.verified, Some(true));
        assert!(r.group.order() <= BigUint::from(1296u32));
        assert_eq!(r.extended, vec![sec(9, 3, 1), sec(9, 9, 3)]);
        let r = resolve(&SRing::cyclotomic(8, &[3]).unwrap(), AutOptions::default()).unwrap();
        assert_eq!(r.verified, Some(true));
    }

    #[test]
    fn isolated_pairs_are_extremal() {
        for n in [8usize, 9, 12, 18, 27] {
            for k in zn::unit_subgroups(n) {
                let a = SRing::cyclotomic(n, &k).unwrap();
                for c in proj_classes(&a).unwrap() {
                    if c.order <= 1 {
                        continue;
                    }
                    let all = isolated_pairs_exhaustive(&a, &c).unwrap();
                    assert!(all.is_empty() || all == vec![(c.s_min, c.s_max)], "{a:?} {c:?} {all:?}");
                }
            }
        }
    }

    #[test]
    fn projective_closure_is_idempotent() {
        // closing the multiple relation again does not merge any two classes
        let a = SRing::group_ring(60);
        let cs = proj_classes(&a).unwrap();
        for (i, c) in cs.iter().enumerate() {
            for d in &cs[i + 1..] {
                for s in &c.sections {
                    for t in &d.sections {
                        assert!(!s.is_multiple_of(t) && !t.is_multiple_of(s));
                    }
                }
            }
        }
        for s in a_sections(&a) {
            assert!(s.is_multiple_of(&s));
        }
    }
}
