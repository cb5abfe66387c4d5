//! Tabulated functors from a theory to abelian groups: values on the
//! objects E^{vee n} up to a chosen rank, plus the action of every
//! enumerated morphism between those ranks. Cross-effects, the degree
//! test, the cross-effect decomposition and the comparison between the
//! bilinearized cross-effect and the cross-effect of the quadratization
//! are all computed from tabulations.

use crate::abgroup::{joint_kernel, tensor, tensor_hom, AbHom, FpAbGroup, IntMatrix};
use crate::theory::{Morphism, Theory};
use crate::ufunctor::{block_mask_fold, UGroup};
use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Mutex;

/// A functor given by lazily computable values and actions. The
/// presentations returned for a fixed rank must be identical across
/// calls (implementations cache them).
pub trait FunctorEval: Sync {
    fn theory(&self) -> Theory;
    fn value(&self, n: usize) -> Result<FpAbGroup, Error>;
    fn action(&self, f: &Morphism) -> Result<AbHom, Error>;
}

/// U_E as an evaluator.
pub struct UEval {
    t: Theory,
    cache: Mutex<BTreeMap<usize, UGroup>>,
}

impl UEval {
    pub fn new(t: &Theory) -> Self {
        UEval { t: *t, cache: Mutex::new(BTreeMap::new()) }
    }

    fn ugroup(&self, n: usize) -> Result<UGroup, Error> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(u) = cache.get(&n) {
            return Ok(u.clone());
        }
        let u = UGroup::new(&self.t, 1, n)?;
        cache.insert(n, u.clone());
        Ok(u)
    }
}

impl FunctorEval for UEval {
    fn theory(&self) -> Theory {
        self.t
    }

    fn value(&self, n: usize) -> Result<FpAbGroup, Error> {
        Ok(self.ugroup(n)?.group().clone())
    }

    fn action(&self, f: &Morphism) -> Result<AbHom, Error> {
        let dom = self.ugroup(f.src())?;
        let cod = self.ugroup(f.dst())?;
        Ok(dom.post_hom(f, &cod))
    }
}

/// U tensor U as an evaluator.
pub struct TensorSquareEval {
    u: UEval,
    cache: Mutex<BTreeMap<usize, FpAbGroup>>,
}

impl TensorSquareEval {
    pub fn new(t: &Theory) -> Self {
        TensorSquareEval { u: UEval::new(t), cache: Mutex::new(BTreeMap::new()) }
    }
}

impl FunctorEval for TensorSquareEval {
    fn theory(&self) -> Theory {
        self.u.t
    }

    fn value(&self, n: usize) -> Result<FpAbGroup, Error> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(g) = cache.get(&n) {
            return Ok(g.clone());
        }
        let u = self.u.value(n)?;
        let g = tensor(&u, &u);
        cache.insert(n, g.clone());
        Ok(g)
    }

    fn action(&self, f: &Morphism) -> Result<AbHom, Error> {
        let post = self.u.action(f)?;
        let dom = self.value(f.src())?;
        let cod = self.value(f.dst())?;
        Ok(tensor_hom(&post, &post, &dom, &cod))
    }
}

/// Quadratization of an inner evaluator: values are the cokernels of
/// the seven-term alternating sums, kept in canonical form.
pub struct T2OfEval<'a> {
    inner: &'a dyn FunctorEval,
    cache: Mutex<BTreeMap<usize, (FpAbGroup, AbHom)>>,
}

impl<'a> T2OfEval<'a> {
    pub fn new(inner: &'a dyn FunctorEval) -> Self {
        T2OfEval { inner, cache: Mutex::new(BTreeMap::new()) }
    }

    fn value_and_proj(&self, n: usize) -> Result<(FpAbGroup, AbHom), Error> {
        let mut cache = self.cache.lock().unwrap();
        if let Some(e) = cache.get(&n) {
            return Ok(e.clone());
        }
        let t = self.inner.theory();
        let masks: [([bool; 3], i64); 7] = [
            ([true, true, true], 1),
            ([true, true, false], -1),
            ([true, false, true], -1),
            ([false, true, true], -1),
            ([true, false, false], 1),
            ([false, true, false], 1),
            ([false, false, true], 1),
        ];
        let base = self.inner.value(n)?;
        let mut rel = AbHom::zero(&self.inner.value(3 * n)?, &base);
        for (m, s) in masks {
            let a = self.inner.action(&block_mask_fold(&t, n, &m))?;
            let a = a.recast(rel.domain(), rel.codomain());
            if s > 0 {
                rel = rel.add(&a);
            } else {
                rel = rel.sub(&a);
            }
        }
        let (raw, raw_proj) = base.quotient(rel.matrix());
        let (canon, to_canon, _) = raw.canonicalize();
        let proj = to_canon.compose(&raw_proj);
        cache.insert(n, (canon.clone(), proj.clone()));
        Ok((canon, proj))
    }

    /// The quotient projection from the inner functor's value.
    pub fn projection(&self, n: usize) -> Result<AbHom, Error> {
        Ok(self.value_and_proj(n)?.1)
    }
}

impl<'a> FunctorEval for T2OfEval<'a> {
    fn theory(&self) -> Theory {
        self.inner.theory()
    }

    fn value(&self, n: usize) -> Result<FpAbGroup, Error> {
        Ok(self.value_and_proj(n)?.0)
    }

    fn action(&self, f: &Morphism) -> Result<AbHom, Error> {
        let (dom, dom_proj) = self.value_and_proj(f.src())?;
        let (cod, cod_proj) = self.value_and_proj(f.dst())?;
        let inner_act = self.inner.action(f)?;
        // lift along a section of dom_proj: dom_proj has a right inverse
        // on generators because it is surjective
        let mut cols = Vec::with_capacity(dom.num_gens());
        for j in 0..dom.num_gens() {
            let pre = dom_proj.preimage(&dom.generator(j)).ok_or_else(|| {
                Error::NotWellDefined("quadratization projection is not surjective".into())
            })?;
            cols.push(cod_proj.apply(&inner_act.apply(&pre)));
        }
        AbHom::new(dom, cod, IntMatrix::from_columns(cod_proj.codomain().num_gens(), &cols))
            .map_err(|_| {
                Error::NotWellDefined(format!("action of {:?} does not descend to T2", f))
            })
    }
}

/// A functor tabulated through a maximal rank, with the action of every
/// enumerated morphism between those ranks. Functoriality is verified
/// exhaustively at construction.
pub struct TabulatedFunctor {
    pub theory: Theory,
    pub max_rank: usize,
    values: Vec<FpAbGroup>,
    actions: BTreeMap<Morphism, AbHom>,
}

impl TabulatedFunctor {
    pub fn tabulate(eval: &dyn FunctorEval, max_rank: usize) -> Result<Self, Error> {
        let t = eval.theory();
        let mut values = Vec::with_capacity(max_rank + 1);
        for n in 0..=max_rank {
            values.push(eval.value(n)?);
        }
        if !values[0].is_trivial() {
            return Err(Error::NotWellDefined("functor is not reduced".into()));
        }
        let mut actions = BTreeMap::new();
        for n in 0..=max_rank {
            for m in 0..=max_rank {
                for f in t.enumerate_homs(n, m)? {
                    let a = eval.action(&f)?;
                    if !a.domain().same_presentation(&values[n])
                        || !a.codomain().same_presentation(&values[m])
                    {
                        return Err(Error::NotWellDefined(
                            "evaluator returned inconsistent presentations".into(),
                        ));
                    }
                    actions.insert(f, a);
                }
            }
        }
        let tab = TabulatedFunctor { theory: t, max_rank, values, actions };
        tab.verify_functoriality()?;
        Ok(tab)
    }

    fn verify_functoriality(&self) -> Result<(), Error> {
        let t = self.theory;
        for n in 0..=self.max_rank {
            let id = t.identity(n);
            if !self.action(&id).equals(&AbHom::identity(&self.values[n])) {
                return Err(Error::NotWellDefined(format!(
                    "identity of rank {} does not act as the identity",
                    n
                )));
            }
        }
        if let Some(fast) = FastActions::build(self) {
            return fast.verify(self);
        }
        for n in 0..=self.max_rank {
            for m in 0..=self.max_rank {
                let homs_nm = t.enumerate_homs(n, m)?;
                for p in 0..=self.max_rank {
                    let homs_mp = t.enumerate_homs(m, p)?;
                    for f in &homs_nm {
                        let af = self.action(f);
                        for g in &homs_mp {
                            let ag = self.action(g);
                            let gf = t.compose(g, f)?;
                            if !self.action(&gf).equals(&ag.compose(af)) {
                                return Err(Error::NotWellDefined(format!(
                                    "functoriality fails on {:?} after {:?}",
                                    g, f
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, n: usize) -> &FpAbGroup {
        &self.values[n]
    }

    pub fn action(&self, f: &Morphism) -> &AbHom {
        self.actions
            .get(f)
            .unwrap_or_else(|| panic!("morphism {:?} outside the tabulated range", f))
    }
}

/// Machine-word copies of the action matrices, usable when every value
/// group has a diagonal relation matrix (free or canonical form). Keeps
/// the exhaustive pairwise functoriality check cheap.
struct FastActions {
    mats: BTreeMap<Morphism, Vec<i64>>,
    moduli: Vec<Vec<i64>>,
}

impl FastActions {
    fn build(tab: &TabulatedFunctor) -> Option<FastActions> {
        let mut moduli = Vec::new();
        for g in &tab.values {
            moduli.push(diagonal_moduli(g)?);
        }
        let mut mats = BTreeMap::new();
        for (f, a) in &tab.actions {
            let m = a.matrix();
            let mut flat = Vec::with_capacity(m.rows() * m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    flat.push(i64::try_from(&m[(i, j)]).ok()?);
                }
            }
            mats.insert(f.clone(), flat);
        }
        Some(FastActions { mats, moduli })
    }

    fn verify(&self, tab: &TabulatedFunctor) -> Result<(), Error> {
        let t = tab.theory;
        let dims: Vec<usize> = tab.values.iter().map(|g| g.num_gens()).collect();
        for n in 0..=tab.max_rank {
            for m in 0..=tab.max_rank {
                let homs_nm = t.enumerate_homs(n, m)?;
                for p in 0..=tab.max_rank {
                    let homs_mp = t.enumerate_homs(m, p)?;
                    let (dn, dm, dp) = (dims[n], dims[m], dims[p]);
                    let md = &self.moduli[p];
                    let mut prod = vec![0i64; dp * dn];
                    for f in &homs_nm {
                        let af = &self.mats[f];
                        for g in &homs_mp {
                            let ag = &self.mats[g];
                            let gf = t.compose(g, f)?;
                            let agf = &self.mats[&gf];
                            prod.iter_mut().for_each(|x| *x = 0);
                            for j in 0..dn {
                                for r in 0..dm {
                                    let c = af[r * dn + j];
                                    if c == 0 {
                                        continue;
                                    }
                                    for i in 0..dp {
                                        prod[i * dn + j] += c * ag[i * dm + r];
                                    }
                                }
                            }
                            for i in 0..dp {
                                for j in 0..dn {
                                    let diff = prod[i * dn + j] - agf[i * dn + j];
                                    let ok = if md[i] == 0 {
                                        diff == 0
                                    } else {
                                        diff % md[i] == 0
                                    };
                                    if !ok {
                                        return Err(Error::NotWellDefined(format!(
                                            "functoriality fails on {:?} after {:?}",
                                            g, f
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-generator moduli when the relation matrix is diagonal: each
/// column has a single nonzero entry, on pairwise distinct rows.
fn diagonal_moduli(g: &FpAbGroup) -> Option<Vec<i64>> {
    let rels = g.relations();
    let mut moduli = vec![0i64; g.num_gens()];
    for c in 0..rels.cols() {
        let mut seen = None;
        for r in 0..g.num_gens() {
            if !rels[(r, c)].is_zero() {
                if seen.is_some() {
                    return None;
                }
                seen = Some(r);
            }
        }
        let r = seen?;
        if moduli[r] != 0 {
            return None;
        }
        moduli[r] = i64::try_from(&rels[(r, c)]).ok()?.abs();
    }
    Some(moduli)
}

/// Convenience tabulations named after the functors they produce.
pub fn tabulate_u(t: &Theory, max_rank: usize) -> Result<TabulatedFunctor, Error> {
    TabulatedFunctor::tabulate(&UEval::new(t), max_rank)
}

pub fn tabulate_tensor_square(t: &Theory, max_rank: usize) -> Result<TabulatedFunctor, Error> {
    TabulatedFunctor::tabulate(&TensorSquareEval::new(t), max_rank)
}

pub fn tabulate_t2u(t: &Theory, max_rank: usize) -> Result<TabulatedFunctor, Error> {
    let u = UEval::new(t);
    let t2 = T2OfEval::new(&u);
    TabulatedFunctor::tabulate(&t2, max_rank)
}

/// Second cross-effect of a tabulated functor at (E^{vee a}, E^{vee b}),
/// with inclusion and the canonical retraction.
pub struct Cr2Data {
    pub a: usize,
    pub b: usize,
    pub group: FpAbGroup,
    pub incl: AbHom,
    pub retr: AbHom,
}

pub fn cr2_of(f: &TabulatedFunctor, a: usize, b: usize) -> Result<Cr2Data, Error> {
    let t = f.theory;
    if a + b > f.max_rank {
        return Err(Error::RankMismatch { expected: f.max_rank, found: a + b });
    }
    let r1 = t.block_retraction(a, a + b, 0);
    let r2 = t.block_retraction(b, a + b, a);
    let (group, incl) = joint_kernel(&[f.action(&r1).clone(), f.action(&r2).clone()]);
    let i1 = t.block_injection(a, a + b, 0);
    let i2 = t.block_injection(b, a + b, a);
    let reduce = AbHom::identity(f.value(a + b))
        .sub(&f.action(&i1).compose(f.action(&r1)))
        .sub(&f.action(&i2).compose(f.action(&r2)));
    let amb = f.value(a + b);
    let mut cols = Vec::with_capacity(amb.num_gens());
    for j in 0..amb.num_gens() {
        let v = reduce.apply(&amb.generator(j));
        let pre = incl
            .preimage(&v)
            .ok_or_else(|| Error::NotWellDefined("cross-effect retraction lift failed".into()))?;
        cols.push(pre);
    }
    let retr = AbHom::new(
        amb.clone(),
        group.clone(),
        IntMatrix::from_columns(group.num_gens(), &cols),
    )
    .map_err(|_| Error::NotWellDefined("cross-effect retraction does not descend".into()))?;
    if !retr.compose(&incl).equals(&AbHom::identity(&group)) {
        return Err(Error::NotWellDefined("rho iota is not the identity".into()));
    }
    Ok(Cr2Data { a, b, group, incl, retr })
}

impl Cr2Data {
    /// Bifunctor action cr2 F(p, q) between cross-effect groups.
    pub fn biaction(
        &self,
        f: &TabulatedFunctor,
        p: &Morphism,
        q: &Morphism,
        target: &Cr2Data,
    ) -> AbHom {
        assert_eq!(p.src(), self.a);
        assert_eq!(q.src(), self.b);
        assert_eq!(p.dst(), target.a);
        assert_eq!(q.dst(), target.b);
        let pq = f.theory.coproduct(p, q);
        target.retr.compose(f.action(&pq)).compose(&self.incl)
    }
}

/// Third cross-effect at (E, E, E): the joint kernel of the three
/// summand-dropping actions.
pub fn cr3_e(f: &TabulatedFunctor) -> Result<FpAbGroup, Error> {
    if f.max_rank < 3 {
        return Err(Error::RankMismatch { expected: 3, found: f.max_rank });
    }
    let t = f.theory;
    let drops: Vec<AbHom> = (1..=3)
        .map(|k| f.action(&t.drop_summand(3, k)).clone())
        .collect();
    Ok(joint_kernel(&drops).0)
}

/// True iff the functor is polynomial of degree <= n (n <= 2).
pub fn is_polynomial_of_degree(f: &TabulatedFunctor, n: usize) -> Result<bool, Error> {
    match n {
        0 => Ok(f.value(1).is_trivial()),
        1 => Ok(cr2_of(f, 1, 1)?.group.is_trivial()),
        2 => Ok(cr3_e(f)?.is_trivial()),
        _ => Err(Error::ShapeMismatch("degree test implemented for n <= 2".into())),
    }
}

/// Explicit mutually inverse pair realizing
/// F(E^{vee n}) = F(E)^n + cr2F(E,E)^{n(n-1)/2} for quadratic F.
pub struct DecompositionIso {
    pub n: usize,
    pub target: FpAbGroup,
    pub forward: AbHom,
    pub backward: AbHom,
}

pub fn decomposition_iso(f: &TabulatedFunctor, n: usize) -> Result<DecompositionIso, Error> {
    if !is_polynomial_of_degree(f, 2)? {
        return Err(Error::NotQuadratic("cr3 at (E,E,E) does not vanish".into()));
    }
    let t = f.theory;
    let cr2 = cr2_of(f, 1, 1)?;
    let mut parts: Vec<FpAbGroup> = vec![f.value(1).clone(); n];
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|k| ((k + 1)..=n).map(move |l| (k, l)))
        .collect();
    parts.extend(std::iter::repeat(cr2.group.clone()).take(pairs.len()));
    let (target, injs, projs) = crate::abgroup::direct_sum(&parts);

    let sel = |k: usize, l: usize| -> Morphism {
        let comps: Vec<Morphism> = (1..=n)
            .map(|p| {
                if p == k {
                    t.injection(1, 2).unwrap()
                } else if p == l {
                    t.injection(2, 2).unwrap()
                } else {
                    t.zero(1, 2)
                }
            })
            .collect();
        t.from_components(&comps).unwrap()
    };

    let mut forward = AbHom::zero(f.value(n), &target);
    for k in 1..=n {
        let r = t.retraction(k, n)?;
        forward = forward.add(&injs[k - 1].compose(f.action(&r)));
    }
    for (idx, (k, l)) in pairs.iter().enumerate() {
        let part = cr2.retr.compose(f.action(&sel(*k, *l)));
        forward = forward.add(&injs[n + idx].compose(&part));
    }

    let mut backward = AbHom::zero(&target, f.value(n));
    for k in 1..=n {
        let i = t.injection(k, n)?;
        backward = backward.add(&f.action(&i).compose(&projs[k - 1]));
    }
    for (idx, (k, l)) in pairs.iter().enumerate() {
        let inc: Vec<Morphism> = vec![
            t.injection(*k, n).unwrap(),
            t.injection(*l, n).unwrap(),
        ];
        let inc = t.from_components(&inc).unwrap();
        let part = f.action(&inc).compose(&cr2.incl);
        backward = backward.add(&part.compose(&projs[n + idx]));
    }

    if !forward.compose(&backward).equals(&AbHom::identity(&target))
        || !backward.compose(&forward).equals(&AbHom::identity(f.value(n)))
    {
        return Err(Error::NotQuadratic(
            "cross-effect decomposition maps are not mutually inverse".into(),
        ));
    }
    Ok(DecompositionIso { n, target, forward, backward })
}

/// T11 of the cross-effect bifunctor of a tabulated functor at (E, E):
/// the quotient of cr2 F(E, E) by the two linearization families.
pub struct T11OfCr2 {
    pub cr2: Cr2Data,
    pub group: FpAbGroup,
    pub proj: AbHom,
}

pub fn t11_of_cr2_tab(f: &TabulatedFunctor) -> Result<T11OfCr2, Error> {
    let t = f.theory;
    let cr_ee = cr2_of(f, 1, 1)?;
    let cr_21 = cr2_of(f, 2, 1)?;
    let cr_12 = cr2_of(f, 1, 2)?;
    let fold = t.fold(2);
    let r1 = t.retraction(1, 2)?;
    let r2 = t.retraction(2, 2)?;
    let id1 = t.identity(1);
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    let k1 = cr_21
        .biaction(f, &fold, &id1, &cr_ee)
        .sub(&cr_21.biaction(f, &r1, &id1, &cr_ee))
        .sub(&cr_21.biaction(f, &r2, &id1, &cr_ee));
    for j in 0..cr_21.group.num_gens() {
        rels.push(k1.apply(&cr_21.group.generator(j)));
    }
    let k2 = cr_12
        .biaction(f, &id1, &fold, &cr_ee)
        .sub(&cr_12.biaction(f, &id1, &r1, &cr_ee))
        .sub(&cr_12.biaction(f, &id1, &r2, &cr_ee));
    for j in 0..cr_12.group.num_gens() {
        rels.push(k2.apply(&cr_12.group.generator(j)));
    }
    let rels = IntMatrix::from_columns(cr_ee.group.num_gens(), &rels).prune_zero_columns();
    let (group, proj) = cr_ee.group.quotient(&rels);
    Ok(T11OfCr2 { cr2: cr_ee, group, proj })
}

/// The comparison between T11(cr2 F)(E,E) and cr2(T2 F)(E,E), computed
/// via both routes and certified to be an isomorphism.
pub struct Cr2T2Comparison {
    pub t11_side: T11OfCr2,
    pub t2_tab: TabulatedFunctor,
    pub cr2_t2: Cr2Data,
    pub map: AbHom,
    pub inverse: AbHom,
}

pub fn t11_cr2_comparison(eval: &dyn FunctorEval) -> Result<Cr2T2Comparison, Error> {
    let tab = TabulatedFunctor::tabulate(eval, 3)?;
    let t2 = T2OfEval::new(eval);
    let t2_tab = TabulatedFunctor::tabulate(&t2, 2)?;
    let t11_side = t11_of_cr2_tab(&tab)?;
    let cr2_t2 = cr2_of(&t2_tab, 1, 1)?;
    // candidate map: v in cr2F(E,E) -> rho(t2(iota v))
    let proj2 = t2.projection(2)?;
    let lift = cr2_t2
        .retr
        .compose(&proj2)
        .compose(&t11_side.cr2.incl);
    let map = AbHom::new(
        t11_side.group.clone(),
        cr2_t2.group.clone(),
        lift.matrix().clone(),
    )
    .map_err(|_| Error::NotWellDefined("comparison map does not factor through t11".into()))?;
    let inverse = map.inverse().ok_or_else(|| {
        Error::NotWellDefined("comparison between T11 cr2 and cr2 T2 is not invertible".into())
    })?;
    Ok(Cr2T2Comparison { t11_side, t2_tab, cr2_t2, map, inverse })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulate_u_values() {
        let g = Theory::gamma();
        let f = tabulate_u(&g, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(f.value(n).rank(), n);
            assert!(f.value(n).invariant_factors().iter().all(|d| d.is_zero()));
        }
    }

    #[test]
    fn cr2_and_cr3_of_tensor_square_gamma() {
        let g = Theory::gamma();
        let f = tabulate_tensor_square(&g, 3).unwrap();
        let c2 = cr2_of(&f, 1, 1).unwrap();
        assert_eq!(c2.group, FpAbGroup::free(2));
        assert!(cr3_e(&f).unwrap().is_trivial());
        assert!(!is_polynomial_of_degree(&f, 1).unwrap());
        assert!(is_polynomial_of_degree(&f, 2).unwrap());
    }

    #[test]
    fn u_on_gamma_is_linear() {
        let g = Theory::gamma();
        let f = tabulate_u(&g, 3).unwrap();
        assert!(is_polynomial_of_degree(&f, 1).unwrap());
    }

    #[test]
    fn u_on_freemod2_is_not_quadratic() {
        let f2 = Theory::free_mod(2);
        let f = tabulate_u(&f2, 3).unwrap();
        assert!(!is_polynomial_of_degree(&f, 1).unwrap());
        assert!(!is_polynomial_of_degree(&f, 2).unwrap());
    }

    #[test]
    fn t2u_tabulates_and_is_quadratic() {
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            let f = tabulate_t2u(&t, 3).unwrap();
            assert!(is_polynomial_of_degree(&f, 2).unwrap());
        }
        let f2 = Theory::free_mod(2);
        let f = tabulate_t2u(&f2, 3).unwrap();
        assert_eq!(f.value(1), &FpAbGroup::cyclic(4));
    }

    #[test]
    fn decomposition_iso_tensor_square() {
        let g = Theory::gamma();
        let f = tabulate_tensor_square(&g, 3).unwrap();
        let d = decomposition_iso(&f, 2).unwrap();
        // Z^4 = Z^2 + Z^2
        assert_eq!(d.target.rank(), 4);
        let d1 = decomposition_iso(&f, 1).unwrap();
        assert_eq!(d1.target, f.value(1).clone());
        decomposition_iso(&f, 3).unwrap();
    }

    #[test]
    fn decomposition_rejects_non_quadratic() {
        let f2 = Theory::free_mod(2);
        let f = tabulate_u(&f2, 3).unwrap();
        assert!(matches!(
            decomposition_iso(&f, 2),
            Err(Error::NotQuadratic(_))
        ));
    }

    #[test]
    fn comparison_u_freemod2() {
        let f2 = Theory::free_mod(2);
        let u = UEval::new(&f2);
        let c = t11_cr2_comparison(&u).unwrap();
        assert_eq!(c.t11_side.group, FpAbGroup::cyclic(2));
        assert_eq!(c.cr2_t2.group, FpAbGroup::cyclic(2));
    }

    #[test]
    fn comparison_tensor_square_gamma() {
        let g = Theory::gamma();
        let ts = TensorSquareEval::new(&g);
        let c = t11_cr2_comparison(&ts).unwrap();
        assert_eq!(c.t11_side.group, FpAbGroup::free(2));
        assert_eq!(c.cr2_t2.group, FpAbGroup::free(2));
    }

    #[test]
    fn comparison_linear_functor_trivial_sides() {
        let g = Theory::gamma();
        let u = UEval::new(&g);
        let c = t11_cr2_comparison(&u).unwrap();
        assert!(c.t11_side.group.is_trivial());
        assert!(c.cr2_t2.group.is_trivial());
    }

    #[test]
    fn cr2_symmetry_via_switch() {
        let f2 = Theory::free_mod(2);
        let f = tabulate_tensor_square(&f2, 3).unwrap();
        let c12 = cr2_of(&f, 1, 2).unwrap();
        let c21 = cr2_of(&f, 2, 1).unwrap();
        let tau = f2.block_switch(1, 2);
        let m = c21.retr.compose(f.action(&tau)).compose(&c12.incl);
        assert!(m.is_isomorphism());
    }

    #[test]
    fn cr2_exactness_on_surjection() {
        // t2 : U -> T2U is a pointwise surjection; the induced map on
        // cr2 at (E,E) must be surjective
        let f2 = Theory::free_mod(2);
        let u = UEval::new(&f2);
        let tab_u = TabulatedFunctor::tabulate(&u, 2).unwrap();
        let t2 = T2OfEval::new(&u);
        let tab_t2 = TabulatedFunctor::tabulate(&t2, 2).unwrap();
        let cu = cr2_of(&tab_u, 1, 1).unwrap();
        let ct = cr2_of(&tab_t2, 1, 1).unwrap();
        let induced = ct.retr.compose(&t2.projection(2).unwrap()).compose(&cu.incl);
        assert!(induced.is_surjective());
    }

    #[test]
    fn t2_of_tensor_square_at_e_matches_tensor_of_t1() {
        // T2(U @ U)(E) = T1U(E) @ T1U(E) on both test theories
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            let ts = TensorSquareEval::new(&t);
            let t2 = T2OfEval::new(&ts);
            let lhs = t2.value(1).unwrap();
            let t1 = crate::ufunctor::t1_of_u(&t, 1, 1).unwrap();
            let rhs = tensor(&t1.group, &t1.group);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn t1_of_diagonalizable_vanishes() {
        // the linearization of U @ U is trivial at E: check that the
        // T1 relations cover the whole group
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            let ts = TensorSquareEval::new(&t);
            // T1 F(E) = coker(F(fold) - F(r1) - F(r2) : F(E vee E) -> F(E))
            let fold = block_mask_fold(&t, 1, &[true, true]);
            let r1 = block_mask_fold(&t, 1, &[true, false]);
            let r2 = block_mask_fold(&t, 1, &[false, true]);
            let rel = ts
                .action(&fold)
                .unwrap()
                .sub(&ts.action(&r1).unwrap())
                .sub(&ts.action(&r2).unwrap());
            let (coker, _) = rel.cokernel();
            assert!(coker.is_trivial());
        }
    }
}
