use ivl_core::action::{
    affine_orbit_invariant, certify_independence, check_representation, is_invariant_all,
    jacobian_rank_at, Independence, ORDER_CAP,
};
use ivl_core::catalog::{group_generators, matrix};
use ivl_core::{
    sqrt_symbol, ActionGroup, Convention, Error, FieldAutomorphism, FieldDescriptor, FieldElem,
    GaloisSigns, Point, RatFunc, Substitution, Var, VarSet,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldDescriptor = FieldDescriptor::RATIONALS;

fn v(f: FieldDescriptor, i: u32) -> RatFunc {
    RatFunc::var(f, Var(i))
}

fn k(f: FieldDescriptor, n: i64) -> RatFunc {
    RatFunc::from_int(f, n)
}

fn x4() -> (VarSet, Vec<Var>) {
    let vs = VarSet::from_names(&["x1", "x2", "x3", "x4"]);
    let vars = vs.vars().collect();
    (vs, vars)
}

fn linear(name: &str) -> FieldAutomorphism {
    let (_, vars) = x4();
    FieldAutomorphism::from_matrix(&matrix(name).unwrap(), &vars, Q).unwrap()
}

#[test]
fn tau_permutes_with_signs() {
    let (vs, vars) = x4();
    let t = linear("tau");
    let shown: Vec<String> = vars.iter().map(|&x| t.image(x).display(&vs).to_string()).collect();
    assert_eq!(shown, ["-x3", "-x2", "-x1", "x4"]);
    assert!(FieldAutomorphism::from_matrix(&ivl_core::RatMatrix::identity(4), &vars, Q)
        .unwrap()
        .is_identity());
}

#[test]
fn singular_matrix_rejected() {
    let (_, vars) = x4();
    let m = ivl_core::RatMatrix::from_int_rows([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 1);
    assert_eq!(FieldAutomorphism::from_matrix(&m, &vars, Q).unwrap_err(), Error::NotInvertible);
}

#[test]
fn monomial_maps() {
    let vs = VarSet::from_names(&["u1", "u2", "u3"]);
    let vars: Vec<Var> = vs.vars().collect();
    let one = FieldElem::one(Q);
    let a = FieldAutomorphism::monomial(
        &[vec![-1, 0, -1], vec![0, -1, 0], vec![0, 0, 1]],
        &[one.clone(), one.clone(), one.clone()],
        &vars,
    )
    .unwrap();
    let shown: Vec<String> = vars.iter().map(|&x| a.image(x).display(&vs).to_string()).collect();
    assert_eq!(shown, ["1/u1", "1/u2", "u3/u1"]);
    assert_eq!(a.order_of(ORDER_CAP).unwrap(), 2);

    let id = FieldAutomorphism::monomial(
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        &[one.clone(), one.clone(), one.clone()],
        &vars,
    )
    .unwrap();
    assert!(id.is_identity());

    let bad = FieldAutomorphism::monomial(
        &[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        &[one.clone(), one.clone(), one.clone()],
        &vars,
    );
    assert_eq!(bad.unwrap_err(), Error::NotUnimodular);
    let zero = FieldAutomorphism::monomial(
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        &[one.clone(), FieldElem::zero(Q), one],
        &vars,
    );
    assert_eq!(zero.unwrap_err(), Error::ZeroCoefficient);
}

#[test]
fn yamasaki_pair_is_fixed() {
    // x -> a/x, y -> a/y with a = 5
    let a = FieldElem::from_int(Q, 5);
    let s = FieldAutomorphism::monomial(&[vec![-1, 0], vec![0, -1]], &[a.clone(), a], &[Var(0), Var(1)]).unwrap();
    let (x, y, five) = (v(Q, 0), v(Q, 1), k(Q, 5));
    let u = x.sub(&y).div(&five.sub(&x.mul(&y))).unwrap();
    let w = x.add(&y).div(&five.add(&x.mul(&y))).unwrap();
    assert!(s.is_invariant(&u).unwrap());
    assert!(s.is_invariant(&w).unwrap());
    assert!(!s.is_invariant(&x).unwrap());
}

#[test]
fn cyclic_invariants() {
    let (x, y, z) = (v(Q, 0), v(Q, 1), v(Q, 2));
    let subst: Substitution = [(Var(0), y.clone()), (Var(1), z.clone()), (Var(2), x.clone())].into();
    let c = FieldAutomorphism::new(Q, GaloisSigns::IDENTITY, subst).unwrap();
    assert_eq!(c.order_of(ORDER_CAP).unwrap(), 3);
    let xyz3 = x.mul(&y).mul(&z).scale(&FieldElem::from_int(Q, 3));
    let den = x
        .pow(2)
        .unwrap()
        .add(&y.pow(2).unwrap())
        .add(&z.pow(2).unwrap())
        .sub(&x.mul(&y))
        .sub(&y.mul(&z))
        .sub(&z.mul(&x));
    let u_num = x.pow(2).unwrap().mul(&y).add(&y.pow(2).unwrap().mul(&z)).add(&z.pow(2).unwrap().mul(&x)).sub(&xyz3);
    let v_num = x.mul(&y.pow(2).unwrap()).add(&y.mul(&z.pow(2).unwrap())).add(&z.mul(&x.pow(2).unwrap())).sub(&xyz3);
    let u = u_num.div(&den).unwrap();
    let w = v_num.div(&den).unwrap();
    assert!(is_invariant_all(&[c.clone()], &u).unwrap());
    assert!(is_invariant_all(&[c.clone()], &w).unwrap());
    assert!(!c.is_invariant(&x.div(&den).unwrap()).unwrap());
}

#[test]
fn galois_twisted_composition() {
    let f = FieldDescriptor::new(&[-1]).unwrap();
    let i = sqrt_symbol(-1, f).unwrap();
    let conj = GaloisSigns::from_pairs(&f, &[(-1, -1)]).unwrap();
    let x = v(f, 0);
    let subst: Substitution = [(Var(0), x.scale(&i))].into();
    let twisted = FieldAutomorphism::new(f, conj, subst.clone()).unwrap();
    let plain = FieldAutomorphism::new(f, GaloisSigns::IDENTITY, subst).unwrap();
    assert_eq!(twisted.order_of(ORDER_CAP).unwrap(), 2);
    assert!(twisted.compose(&twisted).unwrap().is_identity());
    assert_eq!(plain.order_of(ORDER_CAP).unwrap(), 4);
    // coefficient conjugation happens before substitution
    let g = x.scale(&i).add(&k(f, 1));
    let once = twisted.apply(&g).unwrap();
    assert!(once.eq_exact(&x.add(&k(f, 1))));
}

#[test]
fn compose_agrees_with_sequential_apply() {
    let (_, vars) = x4();
    let a = linear("sigma");
    let b = linear("lambda2");
    let f = v(Q, 0).mul(&v(Q, 1)).add(&k(Q, 1)).div(&v(Q, 2).sub(&v(Q, 3))).unwrap();
    let lhs = a.compose(&b).unwrap().apply(&f).unwrap();
    let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
    assert!(lhs.eq_exact(&rhs));
    let m = matrix("sigma").unwrap().mul(&matrix("lambda2").unwrap()).unwrap();
    assert_eq!(FieldAutomorphism::from_matrix(&m, &vars, Q).unwrap(), a.compose(&b).unwrap());
}

#[test]
fn linear_orders() {
    assert_eq!(linear("lambda1").order_of(ORDER_CAP).unwrap(), 4);
    assert_eq!(linear("sigma").order_of(ORDER_CAP).unwrap(), 3);
    assert_eq!(linear("tau").order_of(ORDER_CAP).unwrap(), 2);
    let (_, vars) = x4();
    let shear = ivl_core::RatMatrix::from_int_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 1);
    let s = FieldAutomorphism::from_matrix(&shear, &vars, Q).unwrap();
    assert_eq!(s.order_of(10).unwrap_err(), Error::OrderExceedsCap(10));
}

#[test]
fn homomorphism_on_every_catalog_group() {
    for g in ["Q8", "4.33.3", "4.33.6", "4.33.7", "A5.std", "S5.std", "S5.twist"] {
        let gens = group_generators(g).unwrap();
        assert!(check_representation(&gens, Convention::Column).unwrap(), "{g}");
    }
}

#[test]
fn transposed_sigma_breaks_representation() {
    let mut gens = group_generators("4.33.3").unwrap();
    gens[2] = gens[2].transpose();
    let vars: Vec<Var> = (0..4).map(Var).collect();
    assert!(!check_representation(&group_generators("4.33.3").unwrap(), Convention::Row).unwrap());
    let a = FieldAutomorphism::from_matrix_with(&gens[2], &vars, Q, Convention::Column).unwrap();
    assert_ne!(a, linear("sigma"));
}

#[test]
fn action_groups() {
    let (_, vars) = x4();
    let named = |g: &str| -> Vec<(String, FieldAutomorphism)> {
        group_generators(g)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("g{i}"), FieldAutomorphism::from_matrix(m, &vars, Q).unwrap()))
            .collect()
    };
    assert_eq!(ActionGroup::close(named("Q8"), 100).unwrap().order(), 8);
    assert_eq!(ActionGroup::close(named("4.33.3"), 100).unwrap().order(), 24);
    assert_eq!(ActionGroup::close(named("4.33.3"), 10).unwrap_err(), Error::GroupTooLarge(10));
    let g = ActionGroup::close(named("Q8"), 100).unwrap();
    let sumsq = (0..4).map(|i| v(Q, i).pow(2).unwrap()).fold(k(Q, 0), |a, b| a.add(&b));
    assert!(g.is_invariant(&sumsq).unwrap());
    assert!(g.elements().iter().all(|e| e.is_invariant(&sumsq).unwrap()));
}

#[test]
fn jacobian_ranks() {
    let x = v(Q, 0);
    let y = v(Q, 1);
    let pt: Point = [(Var(0), FieldElem::from_int(Q, 3)), (Var(1), FieldElem::from_int(Q, -2))].into();
    let vars = [Var(0), Var(1)];
    assert_eq!(jacobian_rank_at(&[x.clone(), x.pow(2).unwrap()], &vars, &pt).unwrap(), 1);
    assert_eq!(jacobian_rank_at(&[x.clone(), y.clone()], &vars, &pt).unwrap(), 2);
    let scaled = [x.scale(&FieldElem::from_int(Q, 7)), y.scale(&FieldElem::from_int(Q, -3))];
    assert_eq!(jacobian_rank_at(&scaled, &vars, &pt).unwrap(), 2);
    let pole = [x.clone(), y.inv().unwrap()];
    let zero: Point = [(Var(0), FieldElem::from_int(Q, 1)), (Var(1), FieldElem::zero(Q))].into();
    assert_eq!(jacobian_rank_at(&pole, &vars, &zero).unwrap_err(), Error::PoleAtPoint);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fs = [x.add(&y), x.mul(&y).inv().unwrap()];
    assert!(matches!(certify_independence(&fs, &mut rng), Independence::Certified(_)));
    let dep = [x.add(&y), x.add(&y).pow(3).unwrap()];
    assert_eq!(certify_independence(&dep, &mut rng), Independence::Inconclusive);
}

#[test]
fn affine_orbits() {
    let x = v(Q, 0);
    let flip = FieldAutomorphism::new(Q, GaloisSigns::IDENTITY, [(Var(0), x.neg())].into()).unwrap();
    let id = FieldAutomorphism::identity(Q);
    let r = affine_orbit_invariant(&[id.clone(), flip], Var(0)).unwrap();
    assert!(r.invariant);
    assert!(r.value.eq_exact(&x.pow(2).unwrap().neg()));

    let r = affine_orbit_invariant(&[id.clone()], Var(0)).unwrap();
    assert!(r.invariant && r.value.eq_exact(&x));

    let shifts: Vec<FieldAutomorphism> = (0..3)
        .map(|i| FieldAutomorphism::new(Q, GaloisSigns::IDENTITY, [(Var(0), x.add(&k(Q, i)))].into()).unwrap())
        .collect();
    let r = affine_orbit_invariant(&shifts, Var(0)).unwrap();
    assert!(!r.invariant);
    assert!(r.value.eq_exact(&x.mul(&x.add(&k(Q, 1))).mul(&x.add(&k(Q, 2)))));

    let sq = FieldAutomorphism::new(Q, GaloisSigns::IDENTITY, [(Var(0), x.pow(2).unwrap())].into()).unwrap();
    assert_eq!(affine_orbit_invariant(&[sq], Var(0)).unwrap_err(), Error::NotAffineAction);
}
