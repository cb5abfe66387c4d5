//! The reduced standard projective functor U, its cross-effects, the
//! rings obtained from its linearization and quadratization, and the
//! explicit quotient descriptions of those functors.
//!
//! For a theory with finite hom-sets, U_{E^{vee s}}(Y) is the free
//! abelian group on the nonzero morphisms E^{vee s} -> Y. All derived
//! groups here are presented on that basis, so morphism-level formulas
//! translate directly into coordinates.

use crate::abgroup::{
    joint_kernel, subgroup_from_elements, tensor, AbHom, FpAbGroup, IntMatrix,
};
use crate::theory::{Morphism, Theory};
use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Free abelian group on the nonzero morphisms E^{vee src} -> E^{vee dst}.
#[derive(Clone)]
pub struct UGroup {
    pub theory: Theory,
    pub src: usize,
    pub dst: usize,
    basis: Vec<Morphism>,
    index: BTreeMap<Morphism, usize>,
    group: FpAbGroup,
}

impl UGroup {
    pub fn new(theory: &Theory, src: usize, dst: usize) -> Result<Self, Error> {
        let basis = theory.enumerate_nonzero_homs(src, dst)?;
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let group = FpAbGroup::free(basis.len());
        Ok(UGroup {
            theory: *theory,
            src,
            dst,
            basis,
            index,
            group,
        })
    }

    pub fn group(&self) -> &FpAbGroup {
        &self.group
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, f: &Morphism) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Coordinates of the class of a morphism (the zero morphism is 0).
    pub fn class_of(&self, f: &Morphism) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        if !f.is_zero() {
            let i = *self
                .index
                .get(f)
                .unwrap_or_else(|| panic!("morphism {:?} outside the enumerated basis", f));
            v[i] = BigInt::one();
        }
        v
    }

    /// Z-linear combination of morphism classes.
    pub fn combination(&self, terms: &[(BigInt, Morphism)]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        for (c, f) in terms {
            if !f.is_zero() {
                let i = self.index[f];
                v[i] += c;
            }
        }
        v
    }

    /// Postcomposition U(f) into the U-group with target f.dst().
    pub fn post_hom(&self, f: &Morphism, target: &UGroup) -> AbHom {
        assert_eq!(f.src(), self.dst);
        assert_eq!(f.dst(), target.dst);
        assert_eq!(self.src, target.src);
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|h| target.class_of(&self.theory.compose(f, h).unwrap()))
            .collect();
        AbHom::new(
            self.group.clone(),
            target.group.clone(),
            IntMatrix::from_columns(target.rank(), &cols),
        )
        .expect("free domain")
    }

    /// Precomposition by g : W -> E^{vee src}, giving U_src(Y) -> U_W(Y).
    pub fn pre_hom(&self, g: &Morphism, target: &UGroup) -> AbHom {
        assert_eq!(g.dst(), self.src);
        assert_eq!(g.src(), target.src);
        assert_eq!(self.dst, target.dst);
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|h| target.class_of(&self.theory.compose(h, g).unwrap()))
            .collect();
        AbHom::new(
            self.group.clone(),
            target.group.clone(),
            IntMatrix::from_columns(target.rank(), &cols),
        )
        .expect("free domain")
    }
}

/// A quotient of a U-group, presented on the same morphism basis,
/// with its projection.
#[derive(Clone)]
pub struct QuotU {
    pub u: UGroup,
    pub group: FpAbGroup,
    pub proj: AbHom,
}

impl QuotU {
    fn from_relations(u: UGroup, rel_cols: Vec<Vec<BigInt>>) -> QuotU {
        let rels = IntMatrix::from_columns(u.rank(), &rel_cols).prune_zero_columns();
        let (group, proj) = u.group().quotient(&rels);
        QuotU { u, group, proj }
    }

    /// Class of a morphism in the quotient.
    pub fn class_of(&self, f: &Morphism) -> Vec<BigInt> {
        self.u.class_of(f)
    }

    pub fn combination(&self, terms: &[(BigInt, Morphism)]) -> Vec<BigInt> {
        self.u.combination(terms)
    }

    /// Map induced by postcomposition, checked to descend.
    pub fn induced_post(&self, f: &Morphism, target: &QuotU) -> Result<AbHom, Error> {
        let lift = self.u.post_hom(f, &target.u);
        AbHom::new(self.group.clone(), target.group.clone(), lift.matrix().clone()).map_err(
            |_| Error::NotWellDefined(format!("postcomposition by {:?} does not descend", f)),
        )
    }

    /// Map induced by precomposition, checked to descend.
    pub fn induced_pre(&self, g: &Morphism, target: &QuotU) -> Result<AbHom, Error> {
        let lift = self.u.pre_hom(g, &target.u);
        AbHom::new(self.group.clone(), target.group.clone(), lift.matrix().clone()).map_err(
            |_| Error::NotWellDefined(format!("precomposition by {:?} does not descend", g)),
        )
    }
}

/// Folding map with a mask: E^{vee(k*x)} -> E^{vee x} which is the
/// identity on blocks with mask true and zero on the others.
pub fn block_mask_fold(t: &Theory, x: usize, mask: &[bool]) -> Morphism {
    let total = mask.len() * x;
    let parts: Vec<Morphism> = (0..total)
        .map(|p| {
            let block = p / x;
            let pos = p % x;
            if mask[block] {
                t.injection(pos + 1, x).unwrap()
            } else {
                t.zero(1, x)
            }
        })
        .collect();
    t.from_components(&parts).unwrap()
}

/// Linearization T1 U_{E^{vee src}} (E^{vee x}), presented as the
/// quotient of U(x) by the relations (fold xi) - (r1 xi) - (r2 xi).
pub fn t1_of_u(t: &Theory, src: usize, x: usize) -> Result<QuotU, Error> {
    let u = UGroup::new(t, src, x)?;
    let fold = block_mask_fold(t, x, &[true, true]);
    let r1 = block_mask_fold(t, x, &[true, false]);
    let r2 = block_mask_fold(t, x, &[false, true]);
    let mut rels = Vec::new();
    for xi in t.enumerate_nonzero_homs(src, 2 * x)? {
        rels.push(u.combination(&[
            (BigInt::one(), t.compose(&fold, &xi).unwrap()),
            (-BigInt::one(), t.compose(&r1, &xi).unwrap()),
            (-BigInt::one(), t.compose(&r2, &xi).unwrap()),
        ]));
    }
    Ok(QuotU::from_relations(u, rels))
}

/// Quadratization T2 U_{E^{vee src}} (E^{vee x}): quotient of U(x) by
/// the seven-term alternating sums over morphisms into X vee X vee X.
pub fn t2_of_u(t: &Theory, src: usize, x: usize) -> Result<QuotU, Error> {
    let u = UGroup::new(t, src, x)?;
    let masks: [([bool; 3], i64); 7] = [
        ([true, true, true], 1),
        ([true, true, false], -1),
        ([true, false, true], -1),
        ([false, true, true], -1),
        ([true, false, false], 1),
        ([false, true, false], 1),
        ([false, false, true], 1),
    ];
    let folds: Vec<(Morphism, BigInt)> = masks
        .iter()
        .map(|(m, s)| (block_mask_fold(t, x, m), BigInt::from(*s)))
        .collect();
    let mut rels = Vec::new();
    for xi in t.enumerate_nonzero_homs(src, 3 * x)? {
        let terms: Vec<(BigInt, Morphism)> = folds
            .iter()
            .map(|(f, s)| (s.clone(), t.compose(f, &xi).unwrap()))
            .collect();
        rels.push(u.combination(&terms));
    }
    Ok(QuotU::from_relations(u, rels))
}

/// Bilinearization T11 (cr2 U_{E^{vee src}}) (X, Y) presented as a
/// quotient of U(X vee Y); the class of a morphism xi is t11 of the
/// cross-effect component of xi.
pub fn t11_of_cr2u(t: &Theory, src: usize, x: usize, y: usize) -> Result<QuotU, Error> {
    let u = UGroup::new(t, src, x + y)?;
    let mut rels = Vec::new();
    let i1 = t.block_injection(x, x + y, 0);
    let i2 = t.block_injection(y, x + y, x);
    for f in t.enumerate_nonzero_homs(src, x)? {
        rels.push(u.class_of(&t.compose(&i1, &f).unwrap()));
    }
    for g in t.enumerate_nonzero_homs(src, y)? {
        rels.push(u.class_of(&t.compose(&i2, &g).unwrap()));
    }
    // fold/kill the two X blocks of X vee X vee Y
    let a_map = |mx1: bool, mx2: bool| {
        let total = 2 * x + y;
        let parts: Vec<Morphism> = (0..total)
            .map(|p| {
                if p < x {
                    if mx1 {
                        t.injection(p + 1, x + y).unwrap()
                    } else {
                        t.zero(1, x + y)
                    }
                } else if p < 2 * x {
                    if mx2 {
                        t.injection(p - x + 1, x + y).unwrap()
                    } else {
                        t.zero(1, x + y)
                    }
                } else {
                    t.injection(p - 2 * x + x + 1, x + y).unwrap()
                }
            })
            .collect();
        t.from_components(&parts).unwrap()
    };
    let a_maps = [
        (a_map(true, true), BigInt::one()),
        (a_map(true, false), -BigInt::one()),
        (a_map(false, true), -BigInt::one()),
    ];
    for z in t.enumerate_nonzero_homs(src, 2 * x + y)? {
        let terms: Vec<(BigInt, Morphism)> = a_maps
            .iter()
            .map(|(m, s)| (s.clone(), t.compose(m, &z).unwrap()))
            .collect();
        rels.push(u.combination(&terms));
    }
    // fold/kill the two Y blocks of X vee Y vee Y
    let b_map = |my1: bool, my2: bool| {
        let total = x + 2 * y;
        let parts: Vec<Morphism> = (0..total)
            .map(|p| {
                if p < x {
                    t.injection(p + 1, x + y).unwrap()
                } else if p < x + y {
                    if my1 {
                        t.injection(p + 1, x + y).unwrap()
                    } else {
                        t.zero(1, x + y)
                    }
                } else if my2 {
                    t.injection(p - y + 1, x + y).unwrap()
                } else {
                    t.zero(1, x + y)
                }
            })
            .collect();
        t.from_components(&parts).unwrap()
    };
    let b_maps = [
        (b_map(true, true), BigInt::one()),
        (b_map(true, false), -BigInt::one()),
        (b_map(false, true), -BigInt::one()),
    ];
    for z in t.enumerate_nonzero_homs(src, x + 2 * y)? {
        let terms: Vec<(BigInt, Morphism)> = b_maps
            .iter()
            .map(|(m, s)| (s.clone(), t.compose(m, &z).unwrap()))
            .collect();
        rels.push(u.combination(&terms));
    }
    Ok(QuotU::from_relations(u, rels))
}

/// Split cross-effect data for U at (X, Y): both the kernel and the
/// quotient presentation, their comparison isomorphism, and the
/// section/retraction pair.
#[derive(Clone)]
pub struct CrossEffectSplitting {
    pub ambient: UGroup,
    pub x: usize,
    pub y: usize,
    /// kernel presentation with its inclusion into U(X vee Y)
    pub sub: FpAbGroup,
    pub incl: AbHom,
    /// retraction rho onto the kernel presentation
    pub retr: AbHom,
    /// quotient presentation U(X vee Y)/(i1 U(X) + i2 U(Y))
    pub quot: FpAbGroup,
    pub quot_proj: AbHom,
    /// isomorphism quot -> sub
    pub comparison: AbHom,
}

/// cr2 of U_{E^{vee src}} at (E^{vee x}, E^{vee y}).
pub fn cr2_of_u(t: &Theory, src: usize, x: usize, y: usize) -> Result<CrossEffectSplitting, Error> {
    let ambient = UGroup::new(t, src, x + y)?;
    let ux = UGroup::new(t, src, x)?;
    let uy = UGroup::new(t, src, y)?;
    let r1 = t.block_retraction(x, x + y, 0);
    let r2 = t.block_retraction(y, x + y, x);
    let p1 = ambient.post_hom(&r1, &ux);
    let p2 = ambient.post_hom(&r2, &uy);
    let (sub, incl) = joint_kernel(&[p1.clone(), p2.clone()]);

    // rho = corestriction of (1 - i1 r1 - i2 r2)
    let i1 = t.block_injection(x, x + y, 0);
    let i2 = t.block_injection(y, x + y, x);
    let i1p1 = ux.post_hom(&i1, &ambient).compose(&p1);
    let i2p2 = uy.post_hom(&i2, &ambient).compose(&p2);
    let reduce = AbHom::identity(ambient.group()).sub(&i1p1).sub(&i2p2);
    let mut retr_cols = Vec::with_capacity(ambient.rank());
    for j in 0..ambient.rank() {
        let v = reduce.apply(&ambient.group().generator(j));
        let pre = incl
            .preimage(&v)
            .ok_or_else(|| Error::NotWellDefined("cross-effect retraction lift failed".into()))?;
        retr_cols.push(pre);
    }
    let retr = AbHom::new(
        ambient.group().clone(),
        sub.clone(),
        IntMatrix::from_columns(sub.num_gens(), &retr_cols),
    )
    .expect("free ambient");

    // quotient presentation
    let mut rels = Vec::new();
    for f in t.enumerate_nonzero_homs(src, x)? {
        rels.push(ambient.class_of(&t.compose(&i1, &f).unwrap()));
    }
    for g in t.enumerate_nonzero_homs(src, y)? {
        rels.push(ambient.class_of(&t.compose(&i2, &g).unwrap()));
    }
    let rels = IntMatrix::from_columns(ambient.rank(), &rels).prune_zero_columns();
    let (quot, quot_proj) = ambient.group().quotient(&rels);

    // comparison quot -> sub, [v] -> rho(v)
    let comparison = AbHom::new(quot.clone(), sub.clone(), retr.matrix().clone())
        .map_err(|_| Error::NotWellDefined("cross-effect comparison does not descend".into()))?;

    let split = CrossEffectSplitting {
        ambient,
        x,
        y,
        sub,
        incl,
        retr,
        quot,
        quot_proj,
        comparison,
    };
    split.verify()?;
    Ok(split)
}

impl CrossEffectSplitting {
    fn verify(&self) -> Result<(), Error> {
        if !self
            .retr
            .compose(&self.incl)
            .equals(&AbHom::identity(&self.sub))
        {
            return Err(Error::NotWellDefined("rho iota is not the identity".into()));
        }
        if !self.comparison.is_isomorphism() {
            return Err(Error::NotWellDefined(
                "kernel and quotient presentations of cr2 disagree".into(),
            ));
        }
        let back = self.quot_proj.compose(&self.incl);
        if !back
            .compose(&self.comparison)
            .equals(&AbHom::identity(&self.quot))
        {
            return Err(Error::NotWellDefined(
                "cross-effect comparison maps do not commute".into(),
            ));
        }
        Ok(())
    }

    /// The involution rho U(switch) iota on the kernel presentation
    /// (needs x = y).
    pub fn involution(&self, t: &Theory) -> Result<AbHom, Error> {
        assert_eq!(self.x, self.y, "involution needs equal arguments");
        let tau = t.block_switch(self.x, self.y);
        let post = self.ambient.post_hom(&tau, &self.ambient);
        let h = self.retr.compose(&post).compose(&self.incl);
        if !h.compose(&h).equals(&AbHom::identity(&self.sub)) {
            return Err(Error::InvalidInvolution);
        }
        Ok(h)
    }
}

/// Involution on the T11 cr2 presentation: class of xi maps to the
/// class of switch . xi. Squares to the identity.
pub fn involution_on_t11(t: &Theory, t11: &QuotU, x: usize, y: usize) -> Result<AbHom, Error> {
    assert_eq!(x, y);
    let tau = t.block_switch(x, y);
    let h = t11.induced_post(&tau, t11)?;
    if !h.compose(&h).equals(&AbHom::identity(&t11.group)) {
        return Err(Error::InvalidInvolution);
    }
    Ok(h)
}

/// A ring presented on the generators of its additive group: the unit
/// as an element and one product element per generator pair.
#[derive(Clone)]
pub struct PresentedRing {
    pub add: FpAbGroup,
    pub unit: Vec<BigInt>,
    mult: Vec<Vec<Vec<BigInt>>>,
}

impl PresentedRing {
    pub fn new(add: FpAbGroup, unit: Vec<BigInt>, mult: Vec<Vec<Vec<BigInt>>>) -> Self {
        let n = add.num_gens();
        assert_eq!(unit.len(), n);
        assert_eq!(mult.len(), n);
        assert!(mult.iter().all(|row| row.len() == n));
        PresentedRing { add, unit, mult }
    }

    pub fn gen_product(&self, i: usize, j: usize) -> &Vec<BigInt> {
        &self.mult[i][j]
    }

    /// Bilinear extension of the generator products.
    pub fn multiply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.add.num_gens();
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    *o += &c * m;
                }
            }
        }
        out
    }

    /// Unit laws, associativity on generator triples, and descent of
    /// the multiplication through the presentation.
    pub fn verify(&self) -> Result<(), Error> {
        let n = self.add.num_gens();
        for i in 0..n {
            let e = self.add.generator(i);
            if !self.add.elements_equal(&self.multiply(&self.unit, &e), &e) {
                return Err(Error::AxiomFailure(format!("left unit fails on generator {}", i)));
            }
            if !self.add.elements_equal(&self.multiply(&e, &self.unit), &e) {
                return Err(Error::AxiomFailure(format!("right unit fails on generator {}", i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ei = self.add.generator(i);
                    let ej = self.add.generator(j);
                    let ek = self.add.generator(k);
                    let l = self.multiply(&self.multiply(&ei, &ej), &ek);
                    let r = self.multiply(&ei, &self.multiply(&ej, &ek));
                    if !self.add.elements_equal(&l, &r) {
                        return Err(Error::AxiomFailure(format!(
                            "associativity fails on generators ({}, {}, {})",
                            i, j, k
                        )));
                    }
                }
            }
        }
        let rels = self.add.relations();
        for c in 0..rels.cols() {
            let r = rels.column(c);
            for j in 0..n {
                let e = self.add.generator(j);
                if !self.add.element_is_zero(&self.multiply(&r, &e))
                    || !self.add.element_is_zero(&self.multiply(&e, &r))
                {
                    return Err(Error::AxiomFailure(format!(
                        "multiplication does not descend through relation {}",
                        c
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The rings built from U at E: U(E), its linearization and
/// quadratization, the tensor square of the linearization, and the
/// wreath ring of that tensor square.
pub struct LambdaRings {
    pub lambda: PresentedRing,
    pub lambda_bar: PresentedRing,
    pub lambda_bar_bar: PresentedRing,
    pub lambda_bar_tensor: PresentedRing,
    pub wreath: PresentedRing,
    pub t1u_e: QuotU,
    pub t2u_e: QuotU,
}

/// Pair coordinates (tensor square) of two elements.
pub fn tensor_pair(n: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n * n];
    for p in 0..n {
        for q in 0..n {
            v[p * n + q] = &a[p] * &b[q];
        }
    }
    v
}

pub fn lambda_rings(t: &Theory) -> Result<LambdaRings, Error> {
    let u_e = UGroup::new(t, 1, 1)?;
    let n = u_e.rank();
    let basis = u_e.basis().to_vec();
    let table: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| u_e.class_of(&t.compose(&basis[i], &basis[j]).unwrap()))
                .collect()
        })
        .collect();
    let unit = u_e.class_of(&t.identity(1));

    let lambda = PresentedRing::new(u_e.group().clone(), unit.clone(), table.clone());
    lambda.verify()?;

    let t1 = t1_of_u(t, 1, 1)?;
    let lambda_bar = PresentedRing::new(t1.group.clone(), unit.clone(), table.clone());
    lambda_bar.verify()?;

    let t2 = t2_of_u(t, 1, 1)?;
    let lambda_bar_bar = PresentedRing::new(t2.group.clone(), unit.clone(), table.clone());
    lambda_bar_bar.verify()?;

    // tensor square of the linearization, on generator pairs
    let lt = tensor(&lambda_bar.add, &lambda_bar.add);
    let mut ttable = vec![vec![Vec::new(); n * n]; n * n];
    for i1 in 0..n {
        for j1 in 0..n {
            for i2 in 0..n {
                for j2 in 0..n {
                    ttable[i1 * n + j1][i2 * n + j2] =
                        tensor_pair(n, &table[i1][i2], &table[j1][j2]);
                }
            }
        }
    }
    let tunit = tensor_pair(n, &unit, &unit);
    let lambda_bar_tensor = PresentedRing::new(lt.clone(), tunit.clone(), ttable);
    lambda_bar_tensor.verify()?;

    // wreath ring (tensor square) + (tensor square) . t
    let m = n * n;
    let wadd = crate::abgroup::direct_sum(&[lt.clone(), lt.clone()]).0;
    let embed = |v: &[BigInt], twisted: bool| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); 2 * m];
        let off = if twisted { m } else { 0 };
        for (i, x) in v.iter().enumerate() {
            out[off + i] = x.clone();
        }
        out
    };
    let mut wunit = vec![BigInt::zero(); 2 * m];
    wunit[..m].clone_from_slice(&tunit);
    let mut wtable = vec![vec![Vec::new(); 2 * m]; 2 * m];
    for g1 in 0..2 * m {
        let (p1, tw1) = (g1 % m, g1 >= m);
        let (a1, b1) = (p1 / n, p1 % n);
        for g2 in 0..2 * m {
            let (p2, tw2) = (g2 % m, g2 >= m);
            let (a2, b2) = (p2 / n, p2 % n);
            let val = match (tw1, tw2) {
                // (r1 @ r2)(r1' @ r2') = r1 r1' @ r2 r2'
                (false, false) => {
                    embed(&tensor_pair(n, &table[a1][a2], &table[b1][b2]), false)
                }
                // (r1 @ r2)((s1' @ s2') t) = (r1 s1' @ r2 s2') t
                (false, true) => {
                    embed(&tensor_pair(n, &table[a1][a2], &table[b1][b2]), true)
                }
                // ((s1 @ s2) t)(r1' @ r2') = (s1 r2' @ s2 r1') t
                (true, false) => {
                    embed(&tensor_pair(n, &table[a1][b2], &table[b1][a2]), true)
                }
                // ((s1 @ s2) t)((s1' @ s2') t) = s1 s2' @ s2 s1'
                (true, true) => {
                    embed(&tensor_pair(n, &table[a1][b2], &table[b1][a2]), false)
                }
            };
            wtable[g1][g2] = val;
        }
    }
    let wreath = PresentedRing::new(wadd, wunit, wtable);
    wreath.verify()?;

    Ok(LambdaRings {
        lambda,
        lambda_bar,
        lambda_bar_bar,
        lambda_bar_tensor,
        wreath,
        t1u_e: t1,
        t2u_e: t2,
    })
}

/// Decomposition of U_{E vee E} at X into U(X) + U(X) + U(X) @ U(X).
pub struct UEveDecomposition {
    pub u_eve: UGroup,
    pub u_x: UGroup,
    pub sum: FpAbGroup,
    pub sigma: AbHom,
    pub tau: AbHom,
}

pub fn decompose_u_eve(t: &Theory, x: usize) -> Result<UEveDecomposition, Error> {
    let u_eve = UGroup::new(t, 2, x)?;
    let u_x = UGroup::new(t, 1, x)?;
    let n = u_x.rank();
    let tens = tensor(u_x.group(), u_x.group());
    let (sum, _, projs) = crate::abgroup::direct_sum(&[
        u_x.group().clone(),
        u_x.group().clone(),
        tens.clone(),
    ]);

    let i1 = t.injection(1, 2)?;
    let i2 = t.injection(2, 2)?;
    let mut sigma_cols = Vec::with_capacity(u_eve.rank());
    for h in u_eve.basis() {
        let f = t.compose(h, &i1).unwrap();
        let g = t.compose(h, &i2).unwrap();
        let mut v = vec![BigInt::zero(); sum.num_gens()];
        for (i, c) in u_x.class_of(&f).iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in u_x.class_of(&g).iter().enumerate() {
            v[n + i] += c;
        }
        if !f.is_zero() && !g.is_zero() {
            let (p, q) = (u_x.index_of(&f).unwrap(), u_x.index_of(&g).unwrap());
            v[2 * n + p * n + q] += BigInt::one();
        }
        sigma_cols.push(v);
    }
    let sigma = AbHom::new(
        u_eve.group().clone(),
        sum.clone(),
        IntMatrix::from_columns(sum.num_gens(), &sigma_cols),
    )
    .expect("free domain");

    let r1 = t.retraction(1, 2)?;
    let r2 = t.retraction(2, 2)?;
    let mut tau_first = Vec::new();
    let mut tau_second = Vec::new();
    for f in u_x.basis() {
        tau_first.push(u_eve.class_of(&t.compose(f, &r1).unwrap()));
        tau_second.push(u_eve.class_of(&t.compose(f, &r2).unwrap()));
    }
    let mut tau_tensor = Vec::new();
    for f in u_x.basis() {
        for g in u_x.basis() {
            let fg = t.from_components(&[f.clone(), g.clone()]).unwrap();
            tau_tensor.push(u_eve.combination(&[
                (BigInt::one(), fg),
                (-BigInt::one(), t.compose(f, &r1).unwrap()),
                (-BigInt::one(), t.compose(g, &r2).unwrap()),
            ]));
        }
    }
    let h1 = AbHom::new(
        u_x.group().clone(),
        u_eve.group().clone(),
        IntMatrix::from_columns(u_eve.rank(), &tau_first),
    )
    .expect("free");
    let h2 = AbHom::new(
        u_x.group().clone(),
        u_eve.group().clone(),
        IntMatrix::from_columns(u_eve.rank(), &tau_second),
    )
    .expect("free");
    let h3 = AbHom::new(
        tens.clone(),
        u_eve.group().clone(),
        IntMatrix::from_columns(u_eve.rank(), &tau_tensor),
    )
    .map_err(|_| Error::NotWellDefined("tensor leg of tau does not descend".into()))?;
    let tau = h1
        .compose(&projs[0])
        .add(&h2.compose(&projs[1]))
        .add(&h3.compose(&projs[2]));

    let dec = UEveDecomposition { u_eve, u_x, sum, sigma, tau };
    if !dec.tau.compose(&dec.sigma).equals(&AbHom::identity(dec.u_eve.group()))
        || !dec.sigma.compose(&dec.tau).equals(&AbHom::identity(&dec.sum))
    {
        return Err(Error::NotWellDefined(
            "sigma and tau are not mutually inverse".into(),
        ));
    }
    Ok(dec)
}

/// Verifies naturality of the decomposition against every enumerated
/// morphism X -> Y between the given ranks.
pub fn decompose_u_eve_natural(t: &Theory, x: usize, y: usize) -> Result<(), Error> {
    let dx = decompose_u_eve(t, x)?;
    let dy = decompose_u_eve(t, y)?;
    let tens_dom = tensor(dx.u_x.group(), dx.u_x.group());
    let tens_cod = tensor(dy.u_x.group(), dy.u_x.group());
    let (sum_y, injs_y, _) = crate::abgroup::direct_sum(&[
        dy.u_x.group().clone(),
        dy.u_x.group().clone(),
        tens_cod.clone(),
    ]);
    let (_, _, projs_x) = crate::abgroup::direct_sum(&[
        dx.u_x.group().clone(),
        dx.u_x.group().clone(),
        tens_dom.clone(),
    ]);
    for f in t.enumerate_homs(x, y)? {
        let left = dy.sigma.compose(&dx.u_eve.post_hom(&f, &dy.u_eve));
        let px = dx.u_x.post_hom(&f, &dy.u_x);
        let tens_map = crate::abgroup::tensor_hom(&px, &px, &tens_dom, &tens_cod);
        let mut action = AbHom::zero(&dx.sum, &sum_y);
        let action_parts = [
            injs_y[0].compose(&px).compose(&projs_x[0]),
            injs_y[1].compose(&px).compose(&projs_x[1]),
            injs_y[2].compose(&tens_map).compose(&projs_x[2]),
        ];
        for part in &action_parts {
            let cast = AbHom::new(dx.sum.clone(), sum_y.clone(), part.matrix().clone())
                .expect("same presentation");
            action = action.add(&cast);
        }
        let right = action.compose(&dx.sigma);
        let right = AbHom::new(
            left.domain().clone(),
            left.codomain().clone(),
            right.matrix().clone(),
        )
        .expect("same presentation");
        if !left.equals(&right) {
            return Err(Error::NotWellDefined(format!(
                "decomposition naturality fails at {:?}",
                f
            )));
        }
    }
    Ok(())
}

/// The injection/retraction pair between T1U @ T1U and T2 U_{E vee E},
/// together with the full three-factor decomposition identity.
pub struct T2UEveDecomposition {
    pub t2_u_eve: QuotU,
    pub t2_u_e: QuotU,
    pub t1_u_e: QuotU,
    pub tensor_t1: FpAbGroup,
    pub inj: AbHom,
    pub retr: AbHom,
}

pub fn t2_u_eve_decomposition(t: &Theory, x: usize) -> Result<T2UEveDecomposition, Error> {
    let t2_eve = t2_of_u(t, 2, x)?;
    let t2_e = t2_of_u(t, 1, x)?;
    let t1_e = t1_of_u(t, 1, x)?;
    let tensor_t1 = tensor(&t1_e.group, &t1_e.group);
    let u_x = &t1_e.u;
    let n = u_x.rank();

    let r1 = t.retraction(1, 2)?;
    let r2 = t.retraction(2, 2)?;
    // I(f @ g) = t2((f,g) - f r1 - g r2)
    let mut inj_cols = Vec::new();
    for f in u_x.basis() {
        for g in u_x.basis() {
            let fg = t.from_components(&[f.clone(), g.clone()]).unwrap();
            inj_cols.push(t2_eve.combination(&[
                (BigInt::one(), fg),
                (-BigInt::one(), t.compose(f, &r1).unwrap()),
                (-BigInt::one(), t.compose(g, &r2).unwrap()),
            ]));
        }
    }
    let inj = AbHom::new(
        tensor_t1.clone(),
        t2_eve.group.clone(),
        IntMatrix::from_columns(t2_eve.u.rank(), &inj_cols),
    )
    .map_err(|_| Error::NotWellDefined("injection into T2 U_EvE does not descend".into()))?;

    // R(t2 h) = (h i1) @ (h i2)
    let i1 = t.injection(1, 2)?;
    let i2 = t.injection(2, 2)?;
    let mut retr_cols = Vec::new();
    for h in t2_eve.u.basis() {
        let f = t.compose(h, &i1).unwrap();
        let g = t.compose(h, &i2).unwrap();
        let mut v = vec![BigInt::zero(); n * n];
        if !f.is_zero() && !g.is_zero() {
            let (p, q) = (u_x.index_of(&f).unwrap(), u_x.index_of(&g).unwrap());
            v[p * n + q] = BigInt::one();
        }
        retr_cols.push(v);
    }
    let retr = AbHom::new(
        t2_eve.group.clone(),
        tensor_t1.clone(),
        IntMatrix::from_columns(n * n, &retr_cols),
    )
    .map_err(|_| Error::NotWellDefined("retraction from T2 U_EvE does not descend".into()))?;

    if !retr.compose(&inj).equals(&AbHom::identity(&tensor_t1)) {
        return Err(Error::NotWellDefined("R I is not the identity".into()));
    }

    // id = r1* i1* + r2* i2* + I R on T2 U_{EvE}(X)
    let pre_r1 = t2_e.induced_pre(&r1, &t2_eve)?;
    let pre_r2 = t2_e.induced_pre(&r2, &t2_eve)?;
    let pre_i1 = t2_eve.induced_pre(&i1, &t2_e)?;
    let pre_i2 = t2_eve.induced_pre(&i2, &t2_e)?;
    let idm = pre_r1
        .compose(&pre_i1)
        .add(&pre_r2.compose(&pre_i2))
        .add(&inj.compose(&retr));
    if !idm.equals(&AbHom::identity(&t2_eve.group)) {
        return Err(Error::NotWellDefined(
            "three-factor decomposition of T2 U_EvE fails".into(),
        ));
    }

    Ok(T2UEveDecomposition {
        t2_u_eve: t2_eve,
        t2_u_e: t2_e,
        t1_u_e: t1_e,
        tensor_t1,
        inj,
        retr,
    })
}

/// A normalized table hom(X, Y) -> A (the zero morphism maps to zero).
pub struct MorphismTable {
    pub src: usize,
    pub dst: usize,
    pub target: FpAbGroup,
    values: BTreeMap<Morphism, Vec<BigInt>>,
}

impl MorphismTable {
    pub fn new(
        t: &Theory,
        src: usize,
        dst: usize,
        target: FpAbGroup,
        values: BTreeMap<Morphism, Vec<BigInt>>,
    ) -> Result<Self, Error> {
        for f in t.enumerate_homs(src, dst)? {
            if f.is_zero() {
                if let Some(v) = values.get(&f) {
                    if !target.element_is_zero(v) {
                        return Err(Error::Unnormalized);
                    }
                }
            } else if !values.contains_key(&f) {
                return Err(Error::Schema(format!("table misses morphism {:?}", f)));
            }
        }
        Ok(MorphismTable { src, dst, target, values })
    }

    pub fn value(&self, f: &Morphism) -> Vec<BigInt> {
        if f.is_zero() {
            return vec![BigInt::zero(); self.target.num_gens()];
        }
        self.values[f].clone()
    }

    /// Linear extension to a U-group combination.
    pub fn extend(&self, u: &UGroup, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.target.num_gens()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let val = self.value(&u.basis()[i]);
            for (o, x) in out.iter_mut().zip(&val) {
                *o += c * x;
            }
        }
        out
    }
}

/// Decides quadraticity of a normalized table two ways:
/// (a) its cross-effect factors through t11, and
/// (b) its linear extension factors through t2.
/// Both verdicts are returned and must agree.
pub fn quadratic_map_check(t: &Theory, table: &MorphismTable) -> Result<(bool, bool), Error> {
    let (src, y) = (table.src, table.dst);
    let u_yy = UGroup::new(t, src, 2 * y)?;
    let fold = block_mask_fold(t, y, &[true, true]);
    let r1 = block_mask_fold(t, y, &[true, false]);
    let r2 = block_mask_fold(t, y, &[false, true]);
    let cr = |xi: &Morphism| -> Vec<BigInt> {
        let a = table.value(&t.compose(&fold, xi).unwrap());
        let b = table.value(&t.compose(&r1, xi).unwrap());
        let c = table.value(&t.compose(&r2, xi).unwrap());
        a.iter()
            .zip(b.iter().zip(&c))
            .map(|(a, (b, c))| a - b - c)
            .collect()
    };
    let cr_extend = |v: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); table.target.num_gens()];
        for (i, coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let val = cr(&u_yy.basis()[i]);
            for (o, x) in out.iter_mut().zip(&val) {
                *o += coef * x;
            }
        }
        out
    };
    // (a): the cross-effect kills the relation lattice of t11(cr2 U)(Y, Y)
    let t11 = t11_of_cr2u(t, src, y, y)?;
    let rels = t11.group.relations();
    let mut route_a = true;
    for c in 0..rels.cols() {
        if !table.target.element_is_zero(&cr_extend(&rels.column(c))) {
            route_a = false;
            break;
        }
    }
    // (b): the linear extension kills ker(t2) on U(Y)
    let t2 = t2_of_u(t, src, y)?;
    let rels2 = t2.group.relations();
    let mut route_b = true;
    for c in 0..rels2.cols() {
        if !table
            .target
            .element_is_zero(&table.extend(&t2.u, &rels2.column(c)))
        {
            route_b = false;
            break;
        }
    }
    if route_a != route_b {
        return Err(Error::AxiomFailure(
            "the two quadraticity criteria disagree".into(),
        ));
    }
    Ok((route_a, route_b))
}

/// Subgroup-of-U helper reused by downstream modules.
pub fn u_subgroup(ambient: &UGroup, elements: &[Vec<BigInt>]) -> (FpAbGroup, AbHom) {
    subgroup_from_elements(ambient.group(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_group_examples() {
        let g = Theory::gamma();
        let u = UGroup::new(&g, 1, 1).unwrap();
        assert_eq!(u.rank(), 1);
        let f2 = Theory::free_mod(2);
        let u = UGroup::new(&f2, 1, 2).unwrap();
        assert_eq!(u.rank(), 3);
        assert!(UGroup::new(&Theory::free_group(), 1, 1).is_err());
    }

    #[test]
    fn u_post_zero_is_zero() {
        let f2 = Theory::free_mod(2);
        let u1 = UGroup::new(&f2, 1, 1).unwrap();
        let u2 = UGroup::new(&f2, 1, 2).unwrap();
        let z = f2.zero(1, 2);
        assert!(u1.post_hom(&z, &u2).is_zero_hom());
    }

    #[test]
    fn cr2_u_values() {
        let g = Theory::gamma();
        let s = cr2_of_u(&g, 1, 1, 1).unwrap();
        assert!(s.sub.is_trivial());
        let f2 = Theory::free_mod(2);
        let s = cr2_of_u(&f2, 1, 1, 1).unwrap();
        assert_eq!(s.sub, FpAbGroup::free(1));
        let gen = s.incl.matrix().column(0);
        let sum: BigInt = gen.iter().sum();
        assert_eq!(sum.clone() * sum, BigInt::one());
        let s = cr2_of_u(&f2, 1, 2, 0).unwrap();
        assert!(s.sub.is_trivial());
    }

    #[test]
    fn t1_values() {
        let g = Theory::gamma();
        assert_eq!(t1_of_u(&g, 1, 1).unwrap().group, FpAbGroup::free(1));
        let f2 = Theory::free_mod(2);
        assert_eq!(t1_of_u(&f2, 1, 1).unwrap().group, FpAbGroup::cyclic(2));
        let f3 = Theory::free_mod(3);
        let q = t1_of_u(&f3, 1, 1).unwrap();
        assert_eq!(q.group.invariant_factors(), vec![BigInt::from(3)]);
    }

    #[test]
    fn t2_values() {
        let g = Theory::gamma();
        assert_eq!(t2_of_u(&g, 1, 1).unwrap().group, FpAbGroup::free(1));
        let f2 = Theory::free_mod(2);
        assert_eq!(t2_of_u(&f2, 1, 1).unwrap().group, FpAbGroup::cyclic(4));
        assert!(t2_of_u(&f2, 1, 0).unwrap().group.is_trivial());
    }

    #[test]
    fn t11_values() {
        let g = Theory::gamma();
        assert!(t11_of_cr2u(&g, 1, 1, 1).unwrap().group.is_trivial());
        let f2 = Theory::free_mod(2);
        assert_eq!(t11_of_cr2u(&f2, 1, 1, 1).unwrap().group, FpAbGroup::cyclic(2));
        assert!(t11_of_cr2u(&f2, 1, 1, 0).unwrap().group.is_trivial());
    }

    #[test]
    fn lambda_ring_values() {
        let g = Theory::gamma();
        let r = lambda_rings(&g).unwrap();
        assert_eq!(r.lambda.add, FpAbGroup::free(1));
        assert_eq!(r.lambda_bar.add, FpAbGroup::free(1));
        assert_eq!(r.lambda_bar_bar.add, FpAbGroup::free(1));
        let f2 = Theory::free_mod(2);
        let r = lambda_rings(&f2).unwrap();
        assert_eq!(r.lambda_bar.add, FpAbGroup::cyclic(2));
        assert_eq!(r.lambda_bar_bar.add, FpAbGroup::cyclic(4));
        assert_eq!(r.lambda_bar_tensor.add, FpAbGroup::cyclic(2));
        assert_eq!(
            r.wreath.add.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(2)]
        );
    }

    #[test]
    fn involutions_square_to_identity() {
        let f2 = Theory::free_mod(2);
        let s = cr2_of_u(&f2, 1, 1, 1).unwrap();
        let inv = s.involution(&f2).unwrap();
        assert!(inv.compose(&inv).equals(&AbHom::identity(&s.sub)));
        let t11 = t11_of_cr2u(&f2, 1, 1, 1).unwrap();
        involution_on_t11(&f2, &t11, 1, 1).unwrap();
    }

    #[test]
    fn decompose_u_eve_both_theories() {
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            for x in 0..=3usize {
                decompose_u_eve(&t, x).unwrap();
            }
            decompose_u_eve_natural(&t, 1, 2).unwrap();
            decompose_u_eve_natural(&t, 2, 1).unwrap();
        }
        let d = decompose_u_eve(&Theory::free_mod(2), 1).unwrap();
        assert_eq!(d.u_eve.rank(), 3);
        assert_eq!(d.sum.rank(), 3);
    }

    #[test]
    fn t2_u_eve_decomposition_values() {
        let f2 = Theory::free_mod(2);
        let d = t2_u_eve_decomposition(&f2, 1).unwrap();
        assert_eq!(
            d.t2_u_eve.group.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)]
        );
        let d0 = t2_u_eve_decomposition(&f2, 0).unwrap();
        assert!(d0.t2_u_eve.group.is_trivial());
        let g = Theory::gamma();
        for x in 1..=3usize {
            t2_u_eve_decomposition(&g, x).unwrap();
        }
    }

    #[test]
    fn quadratic_map_criterion_on_linear_table() {
        let f2 = Theory::free_mod(2);
        let z4 = FpAbGroup::cyclic(4);
        let mut values = BTreeMap::new();
        for f in f2.enumerate_nonzero_homs(1, 1).unwrap() {
            values.insert(f, vec![BigInt::one()]);
        }
        let table = MorphismTable::new(&f2, 1, 1, z4.clone(), values).unwrap();
        let (a, b) = quadratic_map_check(&f2, &table).unwrap();
        assert!(a && b);
    }

    #[test]
    fn non_normalized_table_rejected() {
        let f2 = Theory::free_mod(2);
        let z4 = FpAbGroup::cyclic(4);
        let mut values = BTreeMap::new();
        for f in f2.enumerate_homs(1, 1).unwrap() {
            values.insert(f, vec![BigInt::one()]);
        }
        assert!(matches!(
            MorphismTable::new(&f2, 1, 1, z4, values),
            Err(Error::Unnormalized)
        ));
    }
}
