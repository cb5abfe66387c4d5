//! Quadratic and proto-quadratic modules over a pointed theory: the
//! five-part datum (M_e, M_ee, Hhat, T, P) with ring actions, the axiom
//! checkers, the fully faithful embedding of linear modules, and the
//! extraction of the module of a tabulated quadratic functor.

use crate::abgroup::{AbHom, FpAbGroup, IntMatrix};
use crate::functordata::{cr2_of, cr3_e, TabulatedFunctor};
use crate::report::RunReport;
use crate::theory::{Morphism, Theory};
use crate::ufunctor::{t11_of_cr2u, t1_of_u, t2_of_u, QuotU};
use crate::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Presentation of A tensor_Lambda B for a right module A and a left
/// module B, on generator pairs (i, j) -> i * right_gens + j.
pub struct RelativeTensor {
    pub group: FpAbGroup,
    pub left_gens: usize,
    pub right_gens: usize,
}

impl RelativeTensor {
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.right_gens + j
    }

    /// Coordinates of (left element) tensor (right element).
    pub fn pure(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.left_gens * self.right_gens];
        for i in 0..self.left_gens {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.right_gens {
                if !b[j].is_zero() {
                    v[self.pair_index(i, j)] = &a[i] * &b[j];
                }
            }
        }
        v
    }
}

/// Balanced tensor product over the morphism basis of Lambda. The
/// actions are given per nonzero morphism E -> E.
pub fn tensor_over_lambda(
    t: &Theory,
    left: &FpAbGroup,
    left_act: &dyn Fn(&Morphism) -> AbHom,
    right: &FpAbGroup,
    right_act: &dyn Fn(&Morphism) -> AbHom,
) -> Result<RelativeTensor, Error> {
    let (nl, nr) = (left.num_gens(), right.num_gens());
    let idx = |i: usize, j: usize| i * nr + j;
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..left.relations().cols() {
        let r = left.relations().column(c);
        for j in 0..nr {
            let mut col = vec![BigInt::zero(); nl * nr];
            for i in 0..nl {
                col[idx(i, j)] = r[i].clone();
            }
            rel_cols.push(col);
        }
    }
    for c in 0..right.relations().cols() {
        let r = right.relations().column(c);
        for i in 0..nl {
            let mut col = vec![BigInt::zero(); nl * nr];
            for j in 0..nr {
                col[idx(i, j)] = r[j].clone();
            }
            rel_cols.push(col);
        }
    }
    for alpha in t.enumerate_nonzero_homs(1, 1)? {
        let la = left_act(&alpha);
        let ra = right_act(&alpha);
        for i in 0..nl {
            let xi = la.apply(&left.generator(i));
            for j in 0..nr {
                let yj = ra.apply(&right.generator(j));
                // (x . alpha) tensor e_j - e_i tensor (alpha . y)
                let mut col = vec![BigInt::zero(); nl * nr];
                for p in 0..nl {
                    if !xi[p].is_zero() {
                        col[idx(p, j)] += &xi[p];
                    }
                }
                for q in 0..nr {
                    if !yj[q].is_zero() {
                        col[idx(i, q)] -= &yj[q];
                    }
                }
                rel_cols.push(col);
            }
        }
    }
    let rels = IntMatrix::from_columns(nl * nr, &rel_cols).prune_zero_columns();
    Ok(RelativeTensor {
        group: FpAbGroup::new(nl * nr, rels),
        left_gens: nl,
        right_gens: nr,
    })
}

/// Quadratic module datum relative to E. The map Hhat is stored by its
/// values on the classes of morphisms E -> E vee E tensored with M_e.
#[derive(Clone)]
pub struct QuadraticCModule {
    pub theory: Theory,
    pub m_e: FpAbGroup,
    pub m_ee: FpAbGroup,
    lambda_action: BTreeMap<Morphism, AbHom>,
    pair_action: BTreeMap<(Morphism, Morphism), AbHom>,
    pub involution: AbHom,
    hhat: BTreeMap<Morphism, AbHom>,
    pub p: AbHom,
}

impl QuadraticCModule {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theory: Theory,
        m_e: FpAbGroup,
        m_ee: FpAbGroup,
        lambda_action: BTreeMap<Morphism, AbHom>,
        pair_action: BTreeMap<(Morphism, Morphism), AbHom>,
        involution: AbHom,
        hhat: BTreeMap<Morphism, AbHom>,
        p: AbHom,
    ) -> Result<Self, Error> {
        let m = QuadraticCModule {
            theory,
            m_e,
            m_ee,
            lambda_action,
            pair_action,
            involution,
            hhat,
            p,
        };
        m.validate_shapes()?;
        Ok(m)
    }

    fn validate_shapes(&self) -> Result<(), Error> {
        for alpha in self.theory.enumerate_nonzero_homs(1, 1)? {
            let a = self.lambda_action.get(&alpha).ok_or_else(|| {
                Error::Schema(format!("missing action of {:?} on M_e", alpha))
            })?;
            if !a.domain().same_presentation(&self.m_e) || !a.codomain().same_presentation(&self.m_e)
            {
                return Err(Error::ShapeMismatch("M_e action shape".into()));
            }
            for beta in self.theory.enumerate_nonzero_homs(1, 1)? {
                let ab = self
                    .pair_action
                    .get(&(alpha.clone(), beta.clone()))
                    .ok_or_else(|| {
                        Error::Schema(format!("missing action of ({:?}, {:?})", alpha, beta))
                    })?;
                if !ab.domain().same_presentation(&self.m_ee)
                    || !ab.codomain().same_presentation(&self.m_ee)
                {
                    return Err(Error::ShapeMismatch("M_ee action shape".into()));
                }
            }
        }
        for xi in self.theory.enumerate_nonzero_homs(1, 2)? {
            let h = self
                .hhat
                .get(&xi)
                .ok_or_else(|| Error::Schema(format!("missing Hhat value at {:?}", xi)))?;
            if !h.domain().same_presentation(&self.m_e) || !h.codomain().same_presentation(&self.m_ee)
            {
                return Err(Error::ShapeMismatch("Hhat shape".into()));
            }
        }
        if !self.p.domain().same_presentation(&self.m_ee)
            || !self.p.codomain().same_presentation(&self.m_e)
        {
            return Err(Error::ShapeMismatch("P shape".into()));
        }
        if !self.involution.domain().same_presentation(&self.m_ee)
            || !self.involution.codomain().same_presentation(&self.m_ee)
        {
            return Err(Error::ShapeMismatch("involution shape".into()));
        }
        Ok(())
    }

    /// Action of a (possibly zero) endomorphism of E on M_e.
    pub fn act(&self, f: &Morphism) -> AbHom {
        if f.is_zero() {
            AbHom::zero(&self.m_e, &self.m_e)
        } else {
            self.lambda_action[f].clone()
        }
    }

    /// Action of a (possibly zero) pair on M_ee.
    pub fn act2(&self, f: &Morphism, g: &Morphism) -> AbHom {
        if f.is_zero() || g.is_zero() {
            AbHom::zero(&self.m_ee, &self.m_ee)
        } else {
            self.pair_action[&(f.clone(), g.clone())].clone()
        }
    }

    /// Hhat on the class of a morphism E -> E vee E (zero gives zero).
    pub fn hhat_at(&self, xi: &Morphism) -> AbHom {
        if xi.is_zero() {
            AbHom::zero(&self.m_e, &self.m_ee)
        } else {
            self.hhat[xi].clone()
        }
    }

    /// Hhat extended linearly over coordinates in the U(E vee E) basis.
    pub fn hhat_combination(&self, t11: &QuotU, coords: &[BigInt]) -> AbHom {
        let mut h = AbHom::zero(&self.m_e, &self.m_ee);
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let hom = self.hhat_at(&t11.u.basis()[i]);
            h = h.add(&hom.scale(c));
        }
        h
    }

    /// Proto-quadratic axioms: module laws, symmetric structure, PT = P,
    /// diagonal equivariance of P, well-definedness and equivariance of
    /// Hhat, and (QM1).
    pub fn check_proto(&self) -> Result<RunReport, Error> {
        let mut rep = RunReport::new("proto-quadratic axioms");
        let t = &self.theory;
        let endos = t.enumerate_nonzero_homs(1, 1)?;
        let xis = t.enumerate_nonzero_homs(1, 2)?;

        // action of Lambda on M_e is a module structure
        let mut ok = self.act(&t.identity(1)).equals(&AbHom::identity(&self.m_e));
        let mut witness = String::new();
        'law: for a in &endos {
            for b in &endos {
                let ab = t.compose(a, b)?;
                if !self.act(&ab).equals(&self.act(a).compose(&self.act(b))) {
                    ok = false;
                    witness = format!("({:?}, {:?})", a, b);
                    break 'law;
                }
            }
        }
        rep.record("lambda-action-on-Me", ok, witness);

        // action of the tensor square on M_ee is a module structure
        let id = t.identity(1);
        let mut ok = self.act2(&id, &id).equals(&AbHom::identity(&self.m_ee));
        let mut witness = String::new();
        'law2: for a in &endos {
            for b in &endos {
                for c in &endos {
                    for d in &endos {
                        let ac = t.compose(a, c)?;
                        let bd = t.compose(b, d)?;
                        let lhs = self.act2(&ac, &bd);
                        let rhs = self.act2(a, b).compose(&self.act2(c, d));
                        if !lhs.equals(&rhs) {
                            ok = false;
                            witness = format!("({:?}, {:?}, {:?}, {:?})", a, b, c, d);
                            break 'law2;
                        }
                    }
                }
            }
        }
        rep.record("pair-action-on-Mee", ok, witness);

        // the pair action descends through the linearization tensor square
        let rings = crate::ufunctor::lambda_rings(t)?;
        let lt = &rings.lambda_bar_tensor.add;
        let n = endos.len();
        let mut ok = true;
        let mut witness = String::new();
        'descent: for c in 0..lt.relations().cols() {
            let col = lt.relations().column(c);
            let mut acc = AbHom::zero(&self.m_ee, &self.m_ee);
            for i in 0..n {
                for j in 0..n {
                    let coeff = &col[i * n + j];
                    if coeff.is_zero() {
                        continue;
                    }
                    let h = self.act2(&endos[i], &endos[j]);
                    acc = acc.add(&h.scale(coeff));
                }
            }
            if !acc.is_zero_hom() {
                ok = false;
                witness = format!("tensor-square relation {}", c);
                break 'descent;
            }
        }
        rep.record("pair-action-descends", ok, witness);

        // T is an involution compatible with the symmetric structure
        let tt = self.involution.compose(&self.involution);
        rep.record(
            "involution-squares-to-identity",
            tt.equals(&AbHom::identity(&self.m_ee)),
            "T^2 != id",
        );
        let mut ok = true;
        let mut witness = String::new();
        for a in &endos {
            for b in &endos {
                let lhs = self.involution.compose(&self.act2(a, b));
                let rhs = self.act2(b, a).compose(&self.involution);
                if !lhs.equals(&rhs) {
                    ok = false;
                    witness = format!("({:?}, {:?})", a, b);
                }
            }
        }
        rep.record("involution-symmetric-compat", ok, witness);

        // PT = P
        rep.record(
            "PT-equals-P",
            self.p.compose(&self.involution).equals(&self.p),
            "PT != P",
        );

        // diagonal equivariance of P
        let mut ok = true;
        let mut witness = String::new();
        for a in &endos {
            if !self
                .p
                .compose(&self.act2(a, a))
                .equals(&self.act(a).compose(&self.p))
            {
                ok = false;
                witness = format!("{:?}", a);
            }
        }
        rep.record("P-diagonal-equivariance", ok, witness);

        // Hhat is well defined on the relative tensor: it kills the
        // relation lattice of T11(cr2 U)(E,E) and balances the action
        let t11 = t11_of_cr2u(t, 1, 1, 1)?;
        let mut ok = true;
        let mut witness = String::new();
        for c in 0..t11.group.relations().cols() {
            let acc = self.hhat_combination(&t11, &t11.group.relations().column(c));
            if !acc.is_zero_hom() {
                ok = false;
                witness = format!("t11 relation {}", c);
            }
        }
        rep.record("Hhat-kills-t11-relations", ok, witness);

        let mut ok = true;
        let mut witness = String::new();
        for xi in &xis {
            for a in &endos {
                let xa = t.compose(xi, a)?;
                if !self.hhat_at(&xa).equals(&self.hhat_at(xi).compose(&self.act(a))) {
                    ok = false;
                    witness = format!("({:?}, {:?})", xi, a);
                }
            }
        }
        rep.record("Hhat-balanced-over-lambda", ok, witness);

        // Hhat is a morphism of symmetric modules
        let mut ok = true;
        let mut witness = String::new();
        for xi in &xis {
            for a in &endos {
                for b in &endos {
                    let ab_xi = t.compose(&t.coproduct(a, b), xi)?;
                    let lhs = self.hhat_at(&ab_xi);
                    let rhs = self.act2(a, b).compose(&self.hhat_at(xi));
                    if !lhs.equals(&rhs) {
                        ok = false;
                        witness = format!("({:?}, {:?}, {:?})", xi, a, b);
                    }
                }
            }
            let tau_xi = t.compose(&t.switch(), xi)?;
            if !self
                .hhat_at(&tau_xi)
                .equals(&self.involution.compose(&self.hhat_at(xi)))
            {
                ok = false;
                witness = format!("switch at {:?}", xi);
            }
        }
        rep.record("Hhat-symmetric-module-morphism", ok, witness);

        // (QM1): (fold xi) a = (r1 xi) a + (r2 xi) a + P Hhat(xi tensor a)
        let fold = t.fold(2);
        let r1 = t.retraction(1, 2)?;
        let r2 = t.retraction(2, 2)?;
        let mut ok = true;
        let mut witness = String::new();
        for xi in &xis {
            let lhs = self.act(&t.compose(&fold, xi)?);
            let rhs = self
                .act(&t.compose(&r1, xi)?)
                .add(&self.act(&t.compose(&r2, xi)?))
                .add(&self.p.compose(&self.hhat_at(xi)));
            if !lhs.equals(&rhs) {
                ok = false;
                witness = format!("{:?}", xi);
            }
        }
        rep.record("QM1", ok, witness);

        Ok(rep)
    }

    /// Quadratic axioms: proto plus (QM2).
    pub fn check_quadratic(&self) -> Result<RunReport, Error> {
        let mut rep = self.check_proto()?;
        let t = &self.theory;
        let r1 = t.retraction(1, 2)?;
        let r2 = t.retraction(2, 2)?;
        let one_plus_t = AbHom::identity(&self.m_ee).add(&self.involution);
        let mut ok = true;
        let mut witness = String::new();
        for xi in t.enumerate_nonzero_homs(1, 2)? {
            let lhs = self.hhat_at(&xi).compose(&self.p);
            let rhs = self
                .act2(&t.compose(&r1, &xi)?, &t.compose(&r2, &xi)?)
                .compose(&one_plus_t);
            if !lhs.equals(&rhs) {
                ok = false;
                // exhibit a concrete generator witness
                for j in 0..self.m_ee.num_gens() {
                    let m = self.m_ee.generator(j);
                    let l = lhs.apply(&m);
                    let r = rhs.apply(&m);
                    if !self.m_ee.elements_equal(&l, &r) {
                        witness = format!("xi = {:?}, m = generator {}", xi, j);
                        break;
                    }
                }
                if witness.is_empty() {
                    witness = format!("xi = {:?}", xi);
                }
            }
        }
        rep.record("QM2", ok, witness);
        rep.suite = "quadratic axioms".into();
        Ok(rep)
    }

    /// Domain of Hhat as a relative tensor presentation.
    pub fn hhat_domain(&self) -> Result<(QuotU, RelativeTensor), Error> {
        let t = &self.theory;
        let t11 = t11_of_cr2u(t, 1, 1, 1)?;
        let t11c = t11.clone();
        let left_act = move |a: &Morphism| -> AbHom {
            t11c.induced_pre(a, &t11c).expect("precomposition descends on t11")
        };
        let me = self.clone();
        let right_act = move |a: &Morphism| -> AbHom { me.act(a) };
        let rt = tensor_over_lambda(t, &t11.group, &left_act, &self.m_e, &right_act)?;
        Ok((t11, rt))
    }

    /// The cokernel of P with its induced linearized action; the action
    /// of every T1-relation combination must vanish on it.
    pub fn coker_p_action(&self) -> Result<(FpAbGroup, Vec<AbHom>), Error> {
        let (coker, proj) = self.p.cokernel();
        let t = &self.theory;
        let mut acts = Vec::new();
        for a in t.enumerate_nonzero_homs(1, 1)? {
            let lifted = proj.compose(&self.act(&a));
            let act = AbHom::new(coker.clone(), coker.clone(), lifted.matrix().clone())
                .map_err(|_| {
                    Error::NotWellDefined(format!("action of {:?} does not descend to coker(P)", a))
                })?;
            acts.push(act);
        }
        // linearization relations act as zero
        let t1 = t1_of_u(t, 1, 1)?;
        let endos = t.enumerate_nonzero_homs(1, 1)?;
        for c in 0..t1.group.relations().cols() {
            let col = t1.group.relations().column(c);
            let mut acc = AbHom::zero(&coker, &coker);
            for (i, coeff) in col.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let lifted = proj.compose(&self.act(&endos[i]));
                let h = lifted.scale(coeff).recast(&coker, &coker);
                acc = acc.add(&h);
            }
            if !acc.is_zero_hom() {
                return Err(Error::AxiomFailure(
                    "linearized action on coker(P) fails".into(),
                ));
            }
        }
        Ok((coker, acts))
    }

    /// The action of M_e factors through the quadratization: every
    /// kernel-of-t2 combination acts as zero.
    pub fn lambda_action_factors_through_t2(&self) -> Result<bool, Error> {
        let t = &self.theory;
        let t2 = t2_of_u(t, 1, 1)?;
        let endos = t.enumerate_nonzero_homs(1, 1)?;
        for c in 0..t2.group.relations().cols() {
            let col = t2.group.relations().column(c);
            let mut acc = AbHom::zero(&self.m_e, &self.m_e);
            for (i, coeff) in col.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let h = self.act(&endos[i]);
                acc = acc.add(&h.scale(coeff));
            }
            if !acc.is_zero_hom() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Morphism of quadratic modules.
#[derive(Clone)]
pub struct QModMorphism {
    pub phi_e: AbHom,
    pub phi_ee: AbHom,
}

impl QModMorphism {
    pub fn identity(m: &QuadraticCModule) -> Self {
        QModMorphism {
            phi_e: AbHom::identity(&m.m_e),
            phi_ee: AbHom::identity(&m.m_ee),
        }
    }

    pub fn compose(&self, first: &QModMorphism) -> QModMorphism {
        QModMorphism {
            phi_e: self.phi_e.compose(&first.phi_e),
            phi_ee: self.phi_ee.compose(&first.phi_ee),
        }
    }

    /// Equivariance and commutation with Hhat, T, P.
    pub fn check(&self, src: &QuadraticCModule, dst: &QuadraticCModule) -> Result<(), Error> {
        let t = &src.theory;
        for a in t.enumerate_nonzero_homs(1, 1)? {
            if !self
                .phi_e
                .compose(&src.act(&a))
                .equals(&dst.act(&a).compose(&self.phi_e))
            {
                return Err(Error::AxiomFailure(format!("phi_e not equivariant at {:?}", a)));
            }
            for b in t.enumerate_nonzero_homs(1, 1)? {
                if !self
                    .phi_ee
                    .compose(&src.act2(&a, &b))
                    .equals(&dst.act2(&a, &b).compose(&self.phi_ee))
                {
                    return Err(Error::AxiomFailure(format!(
                        "phi_ee not equivariant at ({:?}, {:?})",
                        a, b
                    )));
                }
            }
        }
        if !self
            .phi_ee
            .compose(&src.involution)
            .equals(&dst.involution.compose(&self.phi_ee))
        {
            return Err(Error::AxiomFailure("morphism does not commute with T".into()));
        }
        if !self.phi_e.compose(&src.p).equals(&dst.p.compose(&self.phi_ee)) {
            return Err(Error::AxiomFailure("morphism does not commute with P".into()));
        }
        for xi in t.enumerate_nonzero_homs(1, 2)? {
            if !self
                .phi_ee
                .compose(&src.hhat_at(&xi))
                .equals(&dst.hhat_at(&xi).compose(&self.phi_e))
            {
                return Err(Error::AxiomFailure(format!(
                    "morphism does not commute with Hhat at {:?}",
                    xi
                )));
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.phi_e.is_isomorphism() && self.phi_ee.is_isomorphism()
    }
}

/// Embedding of a linearized module N as a quadratic module with
/// trivial M_ee and all structure maps zero.
pub fn i1_embed(
    t: &Theory,
    n: &FpAbGroup,
    action: BTreeMap<Morphism, AbHom>,
) -> Result<QuadraticCModule, Error> {
    let trivial = FpAbGroup::trivial();
    let mut pair_action = BTreeMap::new();
    for a in t.enumerate_nonzero_homs(1, 1)? {
        for b in t.enumerate_nonzero_homs(1, 1)? {
            pair_action.insert((a.clone(), b), AbHom::identity(&trivial));
        }
    }
    let mut hhat = BTreeMap::new();
    for xi in t.enumerate_nonzero_homs(1, 2)? {
        hhat.insert(xi, AbHom::zero(n, &trivial));
    }
    let m = QuadraticCModule::new(
        *t,
        n.clone(),
        trivial.clone(),
        action,
        pair_action,
        AbHom::identity(&trivial),
        hhat,
        AbHom::zero(&trivial, n),
    )?;
    let rep = m.check_quadratic()?;
    if !rep.all_ok() {
        return Err(Error::AxiomFailure(format!(
            "embedded module fails: {:?}",
            rep.failures()
        )));
    }
    Ok(m)
}

/// The quadratic module of a tabulated quadratic functor:
/// M_e = F(E), M_ee = cr2 F(E,E), T and P from the switch and folding,
/// and Hhat obtained by factoring the cross-effect of the counit
/// approximation through t11. The factorization is computed, not
/// assumed: the returned module passes the full quadratic check.
pub fn s2_of_functor(tab: &TabulatedFunctor) -> Result<QuadraticCModule, Error> {
    let t = tab.theory;
    if tab.max_rank < 3 {
        return Err(Error::RankMismatch { expected: 3, found: tab.max_rank });
    }
    if !cr3_e(tab)?.is_trivial() {
        return Err(Error::NotQuadratic("cr3 at (E,E,E) does not vanish".into()));
    }
    let m_e = tab.value(1).clone();
    let cr2 = cr2_of(tab, 1, 1)?;
    let m_ee = cr2.group.clone();

    let mut lambda_action = BTreeMap::new();
    for a in t.enumerate_nonzero_homs(1, 1)? {
        lambda_action.insert(a.clone(), tab.action(&a).clone());
    }
    let mut pair_action = BTreeMap::new();
    for a in t.enumerate_nonzero_homs(1, 1)? {
        for b in t.enumerate_nonzero_homs(1, 1)? {
            let act = cr2.biaction(tab, &a, &b, &cr2);
            pair_action.insert((a.clone(), b), act);
        }
    }
    let involution = cr2.retr.compose(tab.action(&t.switch())).compose(&cr2.incl);
    let p = tab.action(&t.fold(2)).compose(&cr2.incl);

    let i1 = t.injection(1, 2)?;
    let i2 = t.injection(2, 2)?;
    let r1 = t.retraction(1, 2)?;
    let r2 = t.retraction(2, 2)?;
    let mut hhat = BTreeMap::new();
    for xi in t.enumerate_nonzero_homs(1, 2)? {
        let lift = tab
            .action(&xi)
            .sub(tab.action(&t.compose(&i1, &t.compose(&r1, &xi)?)?))
            .sub(tab.action(&t.compose(&i2, &t.compose(&r2, &xi)?)?));
        hhat.insert(xi, cr2.retr.compose(&lift));
    }

    let m = QuadraticCModule::new(t, m_e, m_ee, lambda_action, pair_action, involution, hhat, p)?;
    let rep = m.check_quadratic()?;
    if !rep.all_ok() {
        return Err(Error::AxiomFailure(format!(
            "extracted module fails quadratic axioms: {:?}",
            rep.failures()
        )));
    }
    Ok(m)
}

/// Standard actions making a group with chosen endomorphism matrices a
/// module over the theory's endomorphisms of E; convenience for tests
/// and descriptors over FreeMod theories where hom(E,E) is cyclic.
pub fn scalar_lambda_action(
    t: &Theory,
    g: &FpAbGroup,
) -> Result<BTreeMap<Morphism, AbHom>, Error> {
    let mut out = BTreeMap::new();
    for a in t.enumerate_nonzero_homs(1, 1)? {
        let s = scalar_of_endo(t, &a);
        let mat = IntMatrix::identity(g.num_gens()).scale(&BigInt::from(s));
        out.insert(a, AbHom::new(g.clone(), g.clone(), mat)?);
    }
    Ok(out)
}

/// The multiplication scalar of an endomorphism of E for the built-in
/// theories with finite hom-sets (Gamma endomorphisms are idempotent:
/// only the identity is nonzero; FreeMod endomorphisms are 1x1).
pub fn scalar_of_endo(t: &Theory, a: &Morphism) -> i64 {
    match a.payload() {
        crate::theory::Payload::Gamma(_) => 1,
        crate::theory::Payload::FreeMod(m) => m[0] as i64,
        crate::theory::Payload::FreeGroup(_) => unreachable!("enumerable theories only"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functordata::{tabulate_t2u, tabulate_tensor_square};

    fn i1_of_constant(t: &Theory, g: FpAbGroup) -> QuadraticCModule {
        let action = scalar_lambda_action(t, &g).unwrap();
        i1_embed(t, &g, action).unwrap()
    }

    #[test]
    fn i1_modules_are_quadratic() {
        let g = Theory::gamma();
        let m = i1_of_constant(&g, FpAbGroup::cyclic(2));
        assert!(m.check_quadratic().unwrap().all_ok());
        let m = i1_of_constant(&g, FpAbGroup::free(1));
        assert!(m.check_quadratic().unwrap().all_ok());
        let m = i1_of_constant(&g, FpAbGroup::trivial());
        assert!(m.check_quadratic().unwrap().all_ok());
        // over FreeMod(2): N = Z/2 with the scalar action
        let f2 = Theory::free_mod(2);
        let m = i1_of_constant(&f2, FpAbGroup::cyclic(2));
        assert!(m.check_quadratic().unwrap().all_ok());
    }

    #[test]
    fn s2_of_tensor_square_gamma() {
        let g = Theory::gamma();
        let tab = tabulate_tensor_square(&g, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        assert_eq!(m.m_e, FpAbGroup::free(1));
        assert_eq!(m.m_ee, FpAbGroup::free(2));
        // T is the swap of the two off-diagonal generators
        let sw = &m.involution;
        let e0 = m.m_ee.generator(0);
        assert!(m.m_ee.elements_equal(&sw.apply(&e0), &m.m_ee.generator(1)));
        // P has matrix (1 1): both generators map to the same generator of M_e
        let p0 = m.p.apply(&m.m_ee.generator(0));
        let p1 = m.p.apply(&m.m_ee.generator(1));
        assert!(m.m_e.elements_equal(&p0, &p1));
        assert!(!m.m_e.element_is_zero(&p0));
        // Hhat vanishes since its domain is trivial over Gamma
        for xi in g.enumerate_nonzero_homs(1, 2).unwrap() {
            assert!(m.hhat_at(&xi).is_zero_hom());
        }
    }

    #[test]
    fn s2_of_t2u_freemod2() {
        let f2 = Theory::free_mod(2);
        let tab = tabulate_t2u(&f2, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        assert_eq!(m.m_e, FpAbGroup::cyclic(4));
        assert!(m.check_quadratic().unwrap().all_ok());
        assert!(m.lambda_action_factors_through_t2().unwrap());
        m.coker_p_action().unwrap();
    }

    #[test]
    fn s2_rejects_non_quadratic() {
        let f2 = Theory::free_mod(2);
        let tab = crate::functordata::tabulate_u(&f2, 3).unwrap();
        assert!(matches!(s2_of_functor(&tab), Err(Error::NotQuadratic(_))));
    }

    #[test]
    fn broken_involution_fails_pt_check() {
        // replacing T by -T on the swap module of Z^2 fails exactly PT = P
        let g = Theory::gamma();
        let tab = tabulate_tensor_square(&g, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let neg = m.involution.neg();
        let bad = QuadraticCModule::new(
            m.theory,
            m.m_e.clone(),
            m.m_ee.clone(),
            m.lambda_action.clone(),
            m.pair_action.clone(),
            neg,
            m.hhat.clone(),
            m.p.clone(),
        )
        .unwrap();
        let rep = bad.check_proto().unwrap();
        let failed: Vec<&str> = rep
            .failures()
            .iter()
            .map(|c| c.id.as_str())
            .collect();
        assert_eq!(failed, vec!["PT-equals-P"]);
    }

    #[test]
    fn relative_tensor_examples() {
        let g = Theory::gamma();
        // Lambda tensor_Lambda B = B (unit law) over Gamma where Lambda = Z
        let lambda = FpAbGroup::free(1);
        let b = FpAbGroup::cyclic(6);
        let id_act = |_: &Morphism| AbHom::identity(&lambda);
        let b_act = |_: &Morphism| AbHom::identity(&b);
        let rt = tensor_over_lambda(&g, &lambda, &id_act, &b, &b_act).unwrap();
        assert_eq!(rt.group, b);
        // Z/2 tensor_Z Z/4 with trivial actions is Z/2
        let a = FpAbGroup::cyclic(2);
        let c = FpAbGroup::cyclic(4);
        let a_act = |_: &Morphism| AbHom::identity(&a);
        let c_act = |_: &Morphism| AbHom::identity(&c);
        let rt = tensor_over_lambda(&g, &a, &a_act, &c, &c_act).unwrap();
        assert_eq!(rt.group, FpAbGroup::cyclic(2));
    }

    #[test]
    fn hhat_domain_trivial_over_gamma() {
        let g = Theory::gamma();
        let tab = tabulate_tensor_square(&g, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let (_, rt) = m.hhat_domain().unwrap();
        assert!(rt.group.is_trivial());
    }

    #[test]
    fn qmod_morphism_laws() {
        let g = Theory::gamma();
        let tab = tabulate_tensor_square(&g, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let id = QModMorphism::identity(&m);
        id.check(&m, &m).unwrap();
        assert!(id.is_isomorphism());
        let comp = id.compose(&id);
        comp.check(&m, &m).unwrap();
    }

    #[test]
    fn axioms_hold_on_random_elements() {
        // matrix identities imply the axioms on every element; sample a
        // few non-generator elements of M_ee and re-check QM2 pointwise
        use rand::{Rng, SeedableRng};
        let f2 = Theory::free_mod(2);
        let tab = tabulate_t2u(&f2, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let t = &m.theory;
        let r1 = t.retraction(1, 2).unwrap();
        let r2 = t.retraction(2, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for xi in t.enumerate_nonzero_homs(1, 2).unwrap() {
            for _ in 0..5 {
                let v: Vec<BigInt> = (0..m.m_ee.num_gens())
                    .map(|_| BigInt::from(rng.gen_range(-7i64..=7)))
                    .collect();
                let lhs = m.hhat_at(&xi).apply(&m.p.apply(&v));
                let tw = m.involution.apply(&v);
                let sum: Vec<BigInt> = v.iter().zip(&tw).map(|(a, b)| a + b).collect();
                let rhs = m
                    .act2(
                        &t.compose(&r1, &xi).unwrap(),
                        &t.compose(&r2, &xi).unwrap(),
                    )
                    .apply(&sum);
                assert!(m.m_ee.elements_equal(&lhs, &rhs));
            }
        }
    }
}
