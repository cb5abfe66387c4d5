//! The classifying ringoid with two objects: endomorphism rings given
//! by the quadratization of U at E and the wreath ring of the tensor
//! square of the linearization, plus the two mixed hom-groups and the
//! six composition laws. Modules over it are translated to and from
//! quadratic modules.

use crate::abgroup::{coinvariants, AbHom, FpAbGroup, IntMatrix};
use crate::functordata::{cr2_of, tabulate_t2u, Cr2Data};
use crate::qmodule::QuadraticCModule;
use crate::report::RunReport;
use crate::theory::{Morphism, Theory};
use crate::ufunctor::{lambda_rings, t11_of_cr2u, LambdaRings, QuotU};
use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// The two objects of the ringoid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ob {
    E,
    Ee,
}

impl fmt::Display for Ob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ob::E => write!(f, "e"),
            Ob::Ee => write!(f, "ee"),
        }
    }
}

/// An element of one of the four hom-groups, in generator coordinates.
#[derive(Clone, Debug)]
pub struct RElement {
    pub src: Ob,
    pub dst: Ob,
    pub coords: Vec<BigInt>,
}

pub struct RingoidR {
    pub theory: Theory,
    pub rings: LambdaRings,
    /// endomorphisms of R_e: quadratization of U at E, on the endo basis
    pub end_e: FpAbGroup,
    /// endomorphisms of R_ee: the wreath ring group
    pub end_ee: FpAbGroup,
    /// hom(R_e, R_ee): bilinearized cross-effect of U at (E, E), on the
    /// basis of morphisms E -> E vee E
    pub hom_e_to_ee: FpAbGroup,
    /// hom(R_ee, R_e): tensor square of the linearization, on pairs
    pub hom_ee_to_e: FpAbGroup,
    endos: Vec<Morphism>,
    xis: Vec<Morphism>,
    t11: QuotU,
}

/// Builds the ringoid and verifies that all six composition laws are
/// well defined on the presentations.
pub fn build_ringoid(t: &Theory) -> Result<RingoidR, Error> {
    let rings = lambda_rings(t)?;
    let t11 = t11_of_cr2u(t, 1, 1, 1)?;
    let endos = t.enumerate_nonzero_homs(1, 1)?;
    let xis = t.enumerate_nonzero_homs(1, 2)?;
    let r = RingoidR {
        theory: *t,
        end_e: rings.lambda_bar_bar.add.clone(),
        end_ee: rings.wreath.add.clone(),
        hom_e_to_ee: t11.group.clone(),
        hom_ee_to_e: rings.lambda_bar_tensor.add.clone(),
        rings,
        endos,
        xis,
        t11,
    };
    r.verify_well_defined()?;
    Ok(r)
}

impl RingoidR {
    pub fn group(&self, src: Ob, dst: Ob) -> &FpAbGroup {
        match (src, dst) {
            (Ob::E, Ob::E) => &self.end_e,
            (Ob::E, Ob::Ee) => &self.hom_e_to_ee,
            (Ob::Ee, Ob::E) => &self.hom_ee_to_e,
            (Ob::Ee, Ob::Ee) => &self.end_ee,
        }
    }

    pub fn num_gens(&self, src: Ob, dst: Ob) -> usize {
        self.group(src, dst).num_gens()
    }

    fn n(&self) -> usize {
        self.endos.len()
    }

    pub fn identity(&self, ob: Ob) -> RElement {
        match ob {
            Ob::E => {
                let mut v = vec![BigInt::zero(); self.n()];
                let id = self.theory.identity(1);
                let i = self.endos.iter().position(|e| *e == id).unwrap();
                v[i] = BigInt::one();
                RElement { src: Ob::E, dst: Ob::E, coords: v }
            }
            Ob::Ee => RElement {
                src: Ob::Ee,
                dst: Ob::Ee,
                coords: self.rings.wreath.unit.clone(),
            },
        }
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.n() + j
    }

    /// Coordinates in hom(R_ee, R_e) of a tensor of two endomorphisms.
    fn pair_class(&self, a: &Morphism, b: &Morphism) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n() * self.n()];
        if !a.is_zero() && !b.is_zero() {
            let i = self.endos.iter().position(|e| e == a).unwrap();
            let j = self.endos.iter().position(|e| e == b).unwrap();
            v[self.pair_index(i, j)] = BigInt::one();
        }
        v
    }

    /// Coordinates in End(R_ee) of a plain or twisted tensor pair.
    fn wreath_class(&self, a: &Morphism, b: &Morphism, twisted: bool) -> Vec<BigInt> {
        let m = self.n() * self.n();
        let mut v = vec![BigInt::zero(); 2 * m];
        if !a.is_zero() && !b.is_zero() {
            let i = self.endos.iter().position(|e| e == a).unwrap();
            let j = self.endos.iter().position(|e| e == b).unwrap();
            v[if twisted { m } else { 0 } + self.pair_index(i, j)] = BigInt::one();
        }
        v
    }

    fn e_class(&self, g: &Morphism) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n()];
        if !g.is_zero() {
            let i = self.endos.iter().position(|e| e == g).unwrap();
            v[i] = BigInt::one();
        }
        v
    }

    fn xi_class(&self, xi: &Morphism) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.xis.len()];
        if !xi.is_zero() {
            let i = self.xis.iter().position(|e| e == xi).unwrap();
            v[i] = BigInt::one();
        }
        v
    }

    /// Product of generator gi of hom(b, c) with generator fi of
    /// hom(a, b), realizing the six composition laws on generators.
    pub fn gen_compose(&self, a: Ob, b: Ob, c: Ob, gi: usize, fi: usize) -> Vec<BigInt> {
        let t = &self.theory;
        let n = self.n();
        match (a, b, c) {
            (Ob::E, Ob::E, Ob::E) => {
                // t2(g) t2(f) = t2(g f)
                let gf = t.compose(&self.endos[gi], &self.endos[fi]).unwrap();
                self.e_class(&gf)
            }
            (Ob::Ee, Ob::E, Ob::E) => {
                // t2(g) (alpha @ beta) = (g alpha) @ (g beta)
                let (i, j) = (fi / n, fi % n);
                let ga = t.compose(&self.endos[gi], &self.endos[i]).unwrap();
                let gb = t.compose(&self.endos[gi], &self.endos[j]).unwrap();
                self.pair_class(&ga, &gb)
            }
            (Ob::E, Ob::E, Ob::Ee) => {
                // xi-tilde t2(g) = (xi g)-tilde
                let xg = t.compose(&self.xis[gi], &self.endos[fi]).unwrap();
                self.xi_class(&xg)
            }
            (Ob::Ee, Ob::E, Ob::Ee) => {
                // xi-tilde (alpha @ beta)
                //   = (r1 xi alpha @ r2 xi beta) + (r1 xi beta @ r2 xi alpha) t
                let (i, j) = (fi / n, fi % n);
                let xi = &self.xis[gi];
                let r1x = t.compose(&t.retraction(1, 2).unwrap(), xi).unwrap();
                let r2x = t.compose(&t.retraction(2, 2).unwrap(), xi).unwrap();
                let p1 = t.compose(&r1x, &self.endos[i]).unwrap();
                let p2 = t.compose(&r2x, &self.endos[j]).unwrap();
                let q1 = t.compose(&r1x, &self.endos[j]).unwrap();
                let q2 = t.compose(&r2x, &self.endos[i]).unwrap();
                let mut v = self.wreath_class(&p1, &p2, false);
                let w = self.wreath_class(&q1, &q2, true);
                for (x, y) in v.iter_mut().zip(&w) {
                    *x += y;
                }
                v
            }
            (Ob::E, Ob::Ee, Ob::E) => {
                // (alpha @ beta) xi-tilde
                //   = t2(fold (alpha vee beta) xi - alpha r1 xi - beta r2 xi)
                let (i, j) = (gi / n, gi % n);
                let (alpha, beta) = (&self.endos[i], &self.endos[j]);
                let xi = &self.xis[fi];
                let ab_xi = t.compose(&t.coproduct(alpha, beta), xi).unwrap();
                let m1 = t.compose(&t.fold(2), &ab_xi).unwrap();
                let m2 = t
                    .compose(alpha, &t.compose(&t.retraction(1, 2).unwrap(), xi).unwrap())
                    .unwrap();
                let m3 = t
                    .compose(beta, &t.compose(&t.retraction(2, 2).unwrap(), xi).unwrap())
                    .unwrap();
                let mut v = self.e_class(&m1);
                for (x, y) in v.iter_mut().zip(&self.e_class(&m2)) {
                    *x -= y;
                }
                for (x, y) in v.iter_mut().zip(&self.e_class(&m3)) {
                    *x -= y;
                }
                v
            }
            (Ob::Ee, Ob::Ee, Ob::E) => {
                // (alpha @ beta)(a @ b) = (alpha a) @ (beta b)
                // (alpha @ beta)((c @ d) t) = (beta d) @ (alpha c)
                let (i, j) = (gi / n, gi % n);
                let (alpha, beta) = (&self.endos[i], &self.endos[j]);
                let m = n * n;
                let (p, tw) = (fi % m, fi >= m);
                let (k, l) = (p / n, p % n);
                if !tw {
                    let aa = t.compose(alpha, &self.endos[k]).unwrap();
                    let bb = t.compose(beta, &self.endos[l]).unwrap();
                    self.pair_class(&aa, &bb)
                } else {
                    let bd = t.compose(beta, &self.endos[l]).unwrap();
                    let ac = t.compose(alpha, &self.endos[k]).unwrap();
                    self.pair_class(&bd, &ac)
                }
            }
            (Ob::E, Ob::Ee, Ob::Ee) => {
                // (a @ b) xi-tilde = ((a vee b) xi)-tilde
                // ((c @ d) t) xi-tilde = ((c vee d) switch xi)-tilde
                let m = n * n;
                let (p, tw) = (gi % m, gi >= m);
                let (k, l) = (p / n, p % n);
                let xi = &self.xis[fi];
                let cop = t.coproduct(&self.endos[k], &self.endos[l]);
                let arg = if tw {
                    t.compose(&t.switch(), xi).unwrap()
                } else {
                    xi.clone()
                };
                let res = t.compose(&cop, &arg).unwrap();
                self.xi_class(&res)
            }
            (Ob::Ee, Ob::Ee, Ob::Ee) => self.rings.wreath.gen_product(gi, fi).clone(),
        }
    }

    /// Bilinear extension of the generator composition.
    pub fn compose(&self, g: &RElement, f: &RElement) -> RElement {
        assert_eq!(f.dst, g.src, "composition through mismatched objects");
        let target = self.group(f.src, g.dst);
        let mut coords = vec![BigInt::zero(); target.num_gens()];
        for (i, gc) in g.coords.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            for (j, fc) in f.coords.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let prod = self.gen_compose(f.src, f.dst, g.dst, i, j);
                let c = gc * fc;
                for (o, p) in coords.iter_mut().zip(&prod) {
                    *o += &c * p;
                }
            }
        }
        RElement { src: f.src, dst: g.dst, coords }
    }

    pub fn generator(&self, src: Ob, dst: Ob, i: usize) -> RElement {
        let g = self.group(src, dst);
        RElement { src, dst, coords: g.generator(i) }
    }

    /// Composition with a relation combination on either side is zero.
    fn verify_well_defined(&self) -> Result<(), Error> {
        let obs = [Ob::E, Ob::Ee];
        for &a in &obs {
            for &b in &obs {
                for &c in &obs {
                    let gab = self.group(a, b);
                    let gbc = self.group(b, c);
                    let gac = self.group(a, c);
                    for rc in 0..gab.relations().cols() {
                        let rel = RElement {
                            src: a,
                            dst: b,
                            coords: gab.relations().column(rc),
                        };
                        for i in 0..gbc.num_gens() {
                            let g = self.generator(b, c, i);
                            let out = self.compose(&g, &rel);
                            if !gac.element_is_zero(&out.coords) {
                                return Err(Error::NotWellDefined(format!(
                                    "law hom({}->{}) o hom({}->{}) fails on relation {}",
                                    b, c, a, b, rc
                                )));
                            }
                        }
                    }
                    for rc in 0..gbc.relations().cols() {
                        let rel = RElement {
                            src: b,
                            dst: c,
                            coords: gbc.relations().column(rc),
                        };
                        for i in 0..gab.num_gens() {
                            let f = self.generator(a, b, i);
                            let out = self.compose(&rel, &f);
                            if !gac.element_is_zero(&out.coords) {
                                return Err(Error::NotWellDefined(format!(
                                    "law hom({}->{}) o hom({}->{}) fails on relation {}",
                                    b, c, a, b, rc
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One associativity (or unit) check, in the report format shared with
/// the command line.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LawCheck {
    pub law: String,
    pub triple: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

fn coords_str(v: &[BigInt]) -> String {
    format!(
        "[{}]",
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    )
}

/// Exhaustive associativity and unit verification over all composable
/// generator triples across the six laws and both endomorphism rings.
pub fn check_associativity(r: &RingoidR) -> Vec<LawCheck> {
    let obs = [Ob::E, Ob::Ee];
    let mut out = Vec::new();
    for &a in &obs {
        for &b in &obs {
            for &c in &obs {
                for &d in &obs {
                    let law = format!("({}>{}) . ({}>{}) . ({}>{})", c, d, b, c, a, b);
                    for fi in 0..r.num_gens(a, b) {
                        let f = r.generator(a, b, fi);
                        for gi in 0..r.num_gens(b, c) {
                            let g = r.generator(b, c, gi);
                            let gf = r.compose(&g, &f);
                            for hi in 0..r.num_gens(c, d) {
                                let h = r.generator(c, d, hi);
                                let lhs = r.compose(&h, &gf);
                                let rhs = r.compose(&r.compose(&h, &g), &f);
                                let ok = r
                                    .group(a, d)
                                    .elements_equal(&lhs.coords, &rhs.coords);
                                out.push(LawCheck {
                                    law: law.clone(),
                                    triple: format!("({}, {}, {})", hi, gi, fi),
                                    lhs: coords_str(&lhs.coords),
                                    rhs: coords_str(&rhs.coords),
                                    ok,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // identities act as units
    for &a in &obs {
        for &b in &obs {
            for i in 0..r.num_gens(a, b) {
                let f = r.generator(a, b, i);
                let l = r.compose(&r.identity(b), &f);
                let rr = r.compose(&f, &r.identity(a));
                let ok = r.group(a, b).elements_equal(&l.coords, &f.coords)
                    && r.group(a, b).elements_equal(&rr.coords, &f.coords);
                out.push(LawCheck {
                    law: format!("unit on ({}>{})", a, b),
                    triple: format!("({})", i),
                    lhs: coords_str(&l.coords),
                    rhs: coords_str(&f.coords),
                    ok,
                });
            }
        }
    }
    out
}

pub fn associativity_report(r: &RingoidR) -> RunReport {
    let mut rep = RunReport::new("ringoid associativity");
    let checks = check_associativity(r);
    let total = checks.len();
    let bad: Vec<&LawCheck> = checks.iter().filter(|c| !c.ok).collect();
    rep.record(
        format!("associativity-and-units ({} triples)", total),
        bad.is_empty(),
        bad.first()
            .map(|c| format!("{} at {}: {} != {}", c.law, c.triple, c.lhs, c.rhs))
            .unwrap_or_default(),
    );
    rep
}

/// The comparison isomorphism between the xi-presented bilinearized
/// cross-effect of U and the cross-effect of the quadratization of U,
/// certified explicitly. This is the hinge of the translation between
/// the two module descriptions.
pub struct HingeComparison {
    pub t11: QuotU,
    pub cr2_t2u: Cr2Data,
    pub map: AbHom,
    pub inverse: AbHom,
}

pub fn hinge_comparison(t: &Theory) -> Result<HingeComparison, Error> {
    let t11 = t11_of_cr2u(t, 1, 1, 1)?;
    let u = crate::functordata::UEval::new(t);
    let t2 = crate::functordata::T2OfEval::new(&u);
    let t2u_tab = crate::functordata::TabulatedFunctor::tabulate(&t2, 2)?;
    let cr2_t2u = cr2_of(&t2u_tab, 1, 1)?;
    // the class of xi maps to rho(t2(xi))
    let proj2 = t2.projection(2)?;
    let u_eve = &t11.u;
    let mut cols = Vec::new();
    for xi in u_eve.basis() {
        let v = proj2.apply(&u_eve.class_of(xi));
        cols.push(cr2_t2u.retr.apply(&v));
    }
    let map = AbHom::new(
        t11.group.clone(),
        cr2_t2u.group.clone(),
        IntMatrix::from_columns(cr2_t2u.group.num_gens(), &cols),
    )
    .map_err(|_| Error::NotWellDefined("hinge comparison does not descend".into()))?;
    let inverse = map.inverse().ok_or_else(|| {
        Error::NotWellDefined("hinge comparison is not an isomorphism".into())
    })?;
    Ok(HingeComparison { t11, cr2_t2u, map, inverse })
}

/// The natural isomorphism between the wreath-balanced tensor with a
/// symmetric module and its coinvariants, with both directions checked.
pub struct ChiIso {
    pub tensor_group: FpAbGroup,
    pub coinv: FpAbGroup,
    pub chi: AbHom,
    pub chi_inv: AbHom,
}

/// chi((alpha @ beta) tensor m) = pi((alpha @ beta) m), inverse
/// m -> (1 @ 1) tensor m. The module is given by its pair action and
/// involution on a group.
pub fn chi_iso(
    t: &Theory,
    m_ee: &FpAbGroup,
    pair_action: &dyn Fn(&Morphism, &Morphism) -> AbHom,
    involution: &AbHom,
) -> Result<ChiIso, Error> {
    let rings = lambda_rings(t)?;
    let endos = t.enumerate_nonzero_homs(1, 1)?;
    let n = endos.len();
    let lt = &rings.lambda_bar_tensor.add;
    let m = n * n;
    // wreath generators act on the left of M_ee, and on the right of
    // the tensor square by the mixed law
    let (sum_gens, nm) = (2 * m, m_ee.num_gens());
    let idx = |i: usize, j: usize| i * nm + j;
    let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..lt.relations().cols() {
        let r = lt.relations().column(c);
        for j in 0..nm {
            let mut col = vec![BigInt::zero(); m * nm];
            for i in 0..m {
                col[idx(i, j)] = r[i].clone();
            }
            rel_cols.push(col);
        }
    }
    for c in 0..m_ee.relations().cols() {
        let r = m_ee.relations().column(c);
        for i in 0..m {
            let mut col = vec![BigInt::zero(); m * nm];
            for j in 0..nm {
                col[idx(i, j)] = r[j].clone();
            }
            rel_cols.push(col);
        }
    }
    // balance over each wreath generator w: (x . w) tensor m - x tensor (w . m)
    for w in 0..sum_gens {
        let (p, tw) = (w % m, w >= m);
        let (k, l) = (p / n, p % n);
        for i in 0..m {
            // right action of w on pair-generator i via the mixed law
            let (a, b) = (i / n, i % n);
            let (ra, rb) = if !tw {
                (
                    t.compose(&endos[a], &endos[k])?,
                    t.compose(&endos[b], &endos[l])?,
                )
            } else {
                (
                    t.compose(&endos[b], &endos[l])?,
                    t.compose(&endos[a], &endos[k])?,
                )
            };
            let mut xw = vec![BigInt::zero(); m];
            if !ra.is_zero() && !rb.is_zero() {
                let ia = endos.iter().position(|e| *e == ra).unwrap();
                let ib = endos.iter().position(|e| *e == rb).unwrap();
                xw[ia * n + ib] = BigInt::one();
            }
            // left action of w on M_ee
            let wm = if !tw {
                pair_action(&endos[k], &endos[l])
            } else {
                pair_action(&endos[k], &endos[l]).compose(involution)
            };
            for j in 0..nm {
                let mut col = vec![BigInt::zero(); m * nm];
                for (p2, c2) in xw.iter().enumerate() {
                    if !c2.is_zero() {
                        col[idx(p2, j)] += c2;
                    }
                }
                let wmi = wm.apply(&m_ee.generator(j));
                for (q2, c2) in wmi.iter().enumerate() {
                    if !c2.is_zero() {
                        col[idx(i, q2)] -= c2;
                    }
                }
                rel_cols.push(col);
            }
        }
    }
    let rels = IntMatrix::from_columns(m * nm, &rel_cols).prune_zero_columns();
    let tensor_group = FpAbGroup::new(m * nm, rels);

    let (coinv, pi) = coinvariants(m_ee, involution)?;

    // chi on generators (pair i, m_j)
    let mut chi_cols = Vec::new();
    for i in 0..m {
        let (a, b) = (i / n, i % n);
        let act = pair_action(&endos[a], &endos[b]);
        for j in 0..nm {
            chi_cols.push(pi.apply(&act.apply(&m_ee.generator(j))));
        }
    }
    let chi = AbHom::new(
        tensor_group.clone(),
        coinv.clone(),
        IntMatrix::from_columns(coinv.num_gens(), &chi_cols),
    )
    .map_err(|_| Error::NotWellDefined("chi does not descend".into()))?;

    // inverse: m -> (1 @ 1) tensor m
    let id = t.identity(1);
    let iid = endos.iter().position(|e| *e == id).unwrap();
    let unit_pair = iid * n + iid;
    let mut inv_cols = Vec::new();
    for j in 0..nm {
        let mut col = vec![BigInt::zero(); m * nm];
        col[idx(unit_pair, j)] = BigInt::one();
        inv_cols.push(col);
    }
    let chi_inv = AbHom::new(
        coinv.clone(),
        tensor_group.clone(),
        IntMatrix::from_columns(tensor_group.num_gens(), &inv_cols),
    )
    .map_err(|_| Error::InvalidInvolution)?;

    if !chi.compose(&chi_inv).equals(&AbHom::identity(&coinv))
        || !chi_inv.compose(&chi).equals(&AbHom::identity(&tensor_group))
    {
        return Err(Error::NotWellDefined("chi and its inverse do not invert".into()));
    }
    Ok(ChiIso { tensor_group, coinv, chi, chi_inv })
}

/// Module over the ringoid, reformulated as the four-part datum: the
/// two value groups with their actions, the structure map p out of the
/// wreath-balanced tensor (stored through its pair components) and the
/// structure map h into M_ee (stored through its xi components).
#[derive(Clone)]
pub struct RModuleData {
    pub theory: Theory,
    pub m_e: FpAbGroup,
    pub m_ee: FpAbGroup,
    pub lambda_action: BTreeMap<Morphism, AbHom>,
    pub pair_action: BTreeMap<(Morphism, Morphism), AbHom>,
    pub involution: AbHom,
    /// p restricted to (alpha @ beta) tensor -, one hom per pair
    pub p_components: BTreeMap<(Morphism, Morphism), AbHom>,
    /// h restricted to xi-tilde tensor -, one hom per xi
    pub h_components: BTreeMap<Morphism, AbHom>,
}

impl RModuleData {
    fn act(&self, f: &Morphism) -> AbHom {
        if f.is_zero() {
            AbHom::zero(&self.m_e, &self.m_e)
        } else {
            self.lambda_action[f].clone()
        }
    }

    fn act2(&self, f: &Morphism, g: &Morphism) -> AbHom {
        if f.is_zero() || g.is_zero() {
            AbHom::zero(&self.m_ee, &self.m_ee)
        } else {
            self.pair_action[&(f.clone(), g.clone())].clone()
        }
    }

    fn p_at(&self, a: &Morphism, b: &Morphism) -> AbHom {
        if a.is_zero() || b.is_zero() {
            AbHom::zero(&self.m_ee, &self.m_e)
        } else {
            self.p_components[&(a.clone(), b.clone())].clone()
        }
    }

    fn h_at(&self, xi: &Morphism) -> AbHom {
        if xi.is_zero() {
            AbHom::zero(&self.m_e, &self.m_ee)
        } else {
            self.h_components[xi].clone()
        }
    }

    /// (RM1) and (RM2) on all generators, plus well-definedness of the
    /// structure maps over the wreath and quadratization balances.
    pub fn check(&self) -> Result<RunReport, Error> {
        let mut rep = RunReport::new("ringoid module axioms");
        let t = &self.theory;
        let endos = t.enumerate_nonzero_homs(1, 1)?;
        let xis = t.enumerate_nonzero_homs(1, 2)?;
        let fold = t.fold(2);
        let r1 = t.retraction(1, 2)?;
        let r2 = t.retraction(2, 2)?;

        // p is balanced over the wreath action: plain part is the pair
        // action, the twisted part composes with the involution
        let mut ok = true;
        let mut wit = String::new();
        for (a, b) in endos.iter().flat_map(|a| endos.iter().map(move |b| (a, b))) {
            for (c, d) in endos.iter().flat_map(|c| endos.iter().map(move |d| (c, d))) {
                let ac = t.compose(a, c)?;
                let bd = t.compose(b, d)?;
                let lhs = self.p_at(&ac, &bd);
                let rhs = self.p_at(a, b).compose(&self.act2(c, d));
                if !lhs.equals(&rhs) {
                    ok = false;
                    wit = format!("plain ({:?},{:?};{:?},{:?})", a, b, c, d);
                }
                let bd2 = t.compose(b, d)?;
                let ac2 = t.compose(a, c)?;
                let lhs_t = self.p_at(&bd2, &ac2);
                let rhs_t = self.p_at(a, b).compose(&self.act2(c, d)).compose(&self.involution);
                if !lhs_t.equals(&rhs_t) {
                    ok = false;
                    wit = format!("twisted ({:?},{:?};{:?},{:?})", a, b, c, d);
                }
            }
        }
        rep.record("p-wreath-balanced", ok, wit);

        // h is balanced over the endomorphism ring of R_e
        let mut ok = true;
        let mut wit = String::new();
        for xi in &xis {
            for g in &endos {
                let xg = t.compose(xi, g)?;
                if !self.h_at(&xg).equals(&self.h_at(xi).compose(&self.act(g))) {
                    ok = false;
                    wit = format!("({:?}, {:?})", xi, g);
                }
            }
        }
        rep.record("h-balanced", ok, wit);

        // h is a morphism of symmetric modules
        let mut ok = true;
        let mut wit = String::new();
        for xi in &xis {
            for (a, b) in endos.iter().flat_map(|a| endos.iter().map(move |b| (a, b))) {
                let ab_xi = t.compose(&t.coproduct(a, b), xi)?;
                if !self.h_at(&ab_xi).equals(&self.act2(a, b).compose(&self.h_at(xi))) {
                    ok = false;
                    wit = format!("({:?}, {:?}, {:?})", xi, a, b);
                }
            }
            let txi = t.compose(&t.switch(), xi)?;
            if !self.h_at(&txi).equals(&self.involution.compose(&self.h_at(xi))) {
                ok = false;
                wit = format!("switch {:?}", xi);
            }
        }
        rep.record("h-symmetric", ok, wit);

        // (RM1): t2(fold (a vee b) xi - a r1 xi - b r2 xi) acts as
        // p((a @ b) tensor h(xi-tilde tensor -))
        let mut ok = true;
        let mut wit = String::new();
        for xi in &xis {
            for (a, b) in endos.iter().flat_map(|a| endos.iter().map(move |b| (a, b))) {
                let ab_xi = t.compose(&t.coproduct(a, b), xi)?;
                let lhs = self
                    .act(&t.compose(&fold, &ab_xi)?)
                    .sub(&self.act(&t.compose(a, &t.compose(&r1, xi)?)?))
                    .sub(&self.act(&t.compose(b, &t.compose(&r2, xi)?)?));
                let rhs = self.p_at(a, b).compose(&self.h_at(xi));
                if !lhs.equals(&rhs) {
                    ok = false;
                    wit = format!("({:?}, {:?}, {:?})", xi, a, b);
                }
            }
        }
        rep.record("RM1", ok, wit);

        // (RM2): h(xi-tilde tensor p((a @ b) tensor m))
        //   = (r1 xi a @ r2 xi b) m + (r1 xi b @ r2 xi a) T m
        let mut ok = true;
        let mut wit = String::new();
        for xi in &xis {
            let r1x = t.compose(&r1, xi)?;
            let r2x = t.compose(&r2, xi)?;
            for (a, b) in endos.iter().flat_map(|a| endos.iter().map(move |b| (a, b))) {
                let lhs = self.h_at(xi).compose(&self.p_at(a, b));
                let rhs = self
                    .act2(&t.compose(&r1x, a)?, &t.compose(&r2x, b)?)
                    .add(
                        &self
                            .act2(&t.compose(&r1x, b)?, &t.compose(&r2x, a)?)
                            .compose(&self.involution),
                    );
                if !lhs.equals(&rhs) {
                    ok = false;
                    wit = format!("({:?}, {:?}, {:?})", xi, a, b);
                }
            }
        }
        rep.record("RM2", ok, wit);

        Ok(rep)
    }
}

/// Translation from a quadratic module to ringoid-module data:
/// p through chi, h through the hinge comparison.
pub fn rmodule_from_qmodule(m: &QuadraticCModule) -> Result<RModuleData, Error> {
    let t = &m.theory;
    // the hinge comparison must exist (abort with a diagnostic if not)
    hinge_comparison(t)?;
    let endos = t.enumerate_nonzero_homs(1, 1)?;
    let xis = t.enumerate_nonzero_homs(1, 2)?;
    let mut p_components = BTreeMap::new();
    for a in &endos {
        for b in &endos {
            p_components.insert((a.clone(), b.clone()), m.p.compose(&m.act2(a, b)));
        }
    }
    let mut h_components = BTreeMap::new();
    for xi in &xis {
        h_components.insert(xi.clone(), m.hhat_at(xi));
    }
    let mut lambda_action = BTreeMap::new();
    let mut pair_action = BTreeMap::new();
    for a in &endos {
        lambda_action.insert(a.clone(), m.act(a));
        for b in &endos {
            pair_action.insert((a.clone(), b.clone()), m.act2(a, b));
        }
    }
    let d = RModuleData {
        theory: *t,
        m_e: m.m_e.clone(),
        m_ee: m.m_ee.clone(),
        lambda_action,
        pair_action,
        involution: m.involution.clone(),
        p_components,
        h_components,
    };
    let rep = d.check()?;
    if !rep.all_ok() {
        return Err(Error::AxiomFailure(format!(
            "translated ringoid module fails: {:?}",
            rep.failures()
        )));
    }
    Ok(d)
}

/// Translation back: Hhat through the hinge comparison and P through
/// the coinvariant factorization of p.
pub fn qmodule_from_rmodule(d: &RModuleData) -> Result<QuadraticCModule, Error> {
    let t = &d.theory;
    hinge_comparison(t)?;
    let id = t.identity(1);
    let p = d.p_at(&id, &id);
    let xis = t.enumerate_nonzero_homs(1, 2)?;
    let mut hhat = BTreeMap::new();
    for xi in &xis {
        hhat.insert(xi.clone(), d.h_at(xi));
    }
    let m = QuadraticCModule::new(
        *t,
        d.m_e.clone(),
        d.m_ee.clone(),
        d.lambda_action.clone(),
        d.pair_action.clone(),
        d.involution.clone(),
        hhat,
        p,
    )?;
    let rep = m.check_quadratic()?;
    if !rep.all_ok() {
        return Err(Error::AxiomFailure(format!(
            "translated quadratic module fails: {:?}",
            rep.failures()
        )));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functordata::{tabulate_t2u, tabulate_tensor_square};
    use crate::qmodule::s2_of_functor;

    #[test]
    fn gamma_ringoid_shapes() {
        let g = Theory::gamma();
        let r = build_ringoid(&g).unwrap();
        assert!(r.hom_e_to_ee.is_trivial());
        assert_eq!(r.end_e, FpAbGroup::free(1));
        // end_ee = Z + Z t
        assert_eq!(r.end_ee.invariant_factors(), vec![BigInt::zero(), BigInt::zero()]);
        // t^2 = 1 in the wreath ring
        let tgen = r.generator(Ob::Ee, Ob::Ee, 1);
        let sq = r.compose(&tgen, &tgen);
        assert!(r
            .end_ee
            .elements_equal(&sq.coords, &r.identity(Ob::Ee).coords));
    }

    #[test]
    fn freemod2_ringoid_shapes() {
        let f2 = Theory::free_mod(2);
        let r = build_ringoid(&f2).unwrap();
        assert_eq!(r.end_e, FpAbGroup::cyclic(4));
        assert_eq!(r.hom_e_to_ee, FpAbGroup::cyclic(2));
        assert_eq!(r.hom_ee_to_e, FpAbGroup::cyclic(2));
        assert_eq!(
            r.end_ee.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(2)]
        );
    }

    #[test]
    fn associativity_passes_both_theories() {
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            let r = build_ringoid(&t).unwrap();
            let checks = check_associativity(&r);
            assert!(!checks.is_empty());
            for c in &checks {
                assert!(c.ok, "violation: {} at {}: {} != {}", c.law, c.triple, c.lhs, c.rhs);
            }
        }
    }

    #[test]
    fn end_e_matches_quadratization_ring() {
        let f2 = Theory::free_mod(2);
        let r = build_ringoid(&f2).unwrap();
        for i in 0..r.num_gens(Ob::E, Ob::E) {
            for j in 0..r.num_gens(Ob::E, Ob::E) {
                let via_ringoid = r.gen_compose(Ob::E, Ob::E, Ob::E, i, j);
                let via_ring = r.rings.lambda_bar_bar.gen_product(i, j).clone();
                assert!(r.end_e.elements_equal(&via_ringoid, &via_ring));
            }
        }
    }

    #[test]
    fn hinge_comparison_is_iso() {
        for t in [Theory::gamma(), Theory::free_mod(2)] {
            let h = hinge_comparison(&t).unwrap();
            assert!(h.map.is_isomorphism());
        }
        let f2 = Theory::free_mod(2);
        let h = hinge_comparison(&f2).unwrap();
        assert_eq!(h.t11.group, FpAbGroup::cyclic(2));
        assert_eq!(h.cr2_t2u.group, FpAbGroup::cyclic(2));
    }

    #[test]
    fn chi_iso_examples() {
        let g = Theory::gamma();
        // M = Z^2 with swap: both sides Z
        let m = FpAbGroup::free(2);
        let swap = AbHom::new(
            m.clone(),
            m.clone(),
            IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]),
        )
        .unwrap();
        let act = |_: &Morphism, _: &Morphism| AbHom::identity(&m);
        let c = chi_iso(&g, &m, &act, &swap).unwrap();
        assert_eq!(c.coinv, FpAbGroup::free(1));
        assert_eq!(c.tensor_group, FpAbGroup::free(1));
        // trivial involution: identity-like
        let idm = AbHom::identity(&m);
        let c = chi_iso(&g, &m, &act, &idm).unwrap();
        assert_eq!(c.coinv, m);
        // M = Z with t = -1: both sides Z/2
        let z = FpAbGroup::free(1);
        let neg = AbHom::identity(&z).neg();
        let actz = |_: &Morphism, _: &Morphism| AbHom::identity(&z);
        let c = chi_iso(&g, &z, &actz, &neg).unwrap();
        assert_eq!(c.coinv, FpAbGroup::cyclic(2));
        assert_eq!(c.tensor_group, FpAbGroup::cyclic(2));
    }

    #[test]
    fn rmodule_round_trip_gamma() {
        let g = Theory::gamma();
        let tab = tabulate_tensor_square(&g, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let d = rmodule_from_qmodule(&m).unwrap();
        // h has trivial domain over Gamma
        for (_, h) in d.h_components.iter() {
            assert!(h.is_zero_hom());
        }
        let back = qmodule_from_rmodule(&d).unwrap();
        assert!(back.p.equals(&m.p));
        assert!(back.involution.equals(&m.involution));
    }

    #[test]
    fn rmodule_round_trip_freemod2() {
        let f2 = Theory::free_mod(2);
        let tab = tabulate_t2u(&f2, 3).unwrap();
        let m = s2_of_functor(&tab).unwrap();
        let d = rmodule_from_qmodule(&m).unwrap();
        assert!(d.check().unwrap().all_ok());
        let back = qmodule_from_rmodule(&d).unwrap();
        assert!(back.p.equals(&m.p));
        assert!(back.involution.equals(&m.involution));
        for xi in f2.enumerate_nonzero_homs(1, 2).unwrap() {
            assert!(back.hhat_at(&xi).equals(&m.hhat_at(&xi)));
        }
    }

    #[test]
    fn i1_translates_with_zero_structure() {
        let g = Theory::gamma();
        let n = FpAbGroup::cyclic(3);
        let action = crate::qmodule::scalar_lambda_action(&g, &n).unwrap();
        let m = crate::qmodule::i1_embed(&g, &n, action).unwrap();
        let d = rmodule_from_qmodule(&m).unwrap();
        assert!(d.check().unwrap().all_ok());
        for (_, p) in d.p_components.iter() {
            assert!(p.is_zero_hom());
        }
    }
}
