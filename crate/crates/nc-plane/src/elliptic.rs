//! The commutative side: the plane cubic E of point modules, the shift map
//! sigma, ideals of points, restriction to E, and the membership
//! computations in the q-deformed counterexample ring.
//!
//! The point scheme is extracted by multilinearizing the three quadratic
//! relations: for a point p, the 3x3 matrix M(p) acts on the coordinates of
//! the next point of a point module, det M(p) cuts out E, and the kernel
//! direction of M(p) is sigma(p).

use crate::algebra::{AlgebraElement, Family, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::{Enumerable, Field};
use crate::grmod::{DegreewiseModule, ModulePresentation};
use crate::matrix::Matrix;
use rand::Rng;
use std::collections::BTreeMap;

/// Dense-enough commutative polynomial in three variables, for the cubic.
type TriPoly<F> = BTreeMap<(u8, u8, u8), <F as Field>::Elem>;

fn tri_add_term<F: Field>(f: &F, p: &mut TriPoly<F>, m: (u8, u8, u8), c: &F::Elem) {
    let entry = p.entry(m).or_insert_with(|| f.zero());
    *entry = f.add(entry, c);
    if f.is_zero(entry) {
        p.remove(&m);
    }
}

fn tri_mul<F: Field>(f: &F, a: &TriPoly<F>, b: &TriPoly<F>) -> TriPoly<F> {
    let mut out = TriPoly::<F>::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = (ma.0 + mb.0, ma.1 + mb.1, ma.2 + mb.2);
            let c = f.mul(ca, cb);
            tri_add_term(f, &mut out, m, &c);
        }
    }
    out
}

fn var_monomial(j: usize) -> (u8, u8, u8) {
    match j {
        0 => (1, 0, 0),
        1 => (0, 1, 0),
        _ => (0, 0, 1),
    }
}

/// A projective point, stored with its first nonzero coordinate scaled to 1.
#[derive(Clone, Debug)]
pub struct EPoint<F: Field> {
    pub coords: [F::Elem; 3],
}

impl<F: Field> PartialEq for EPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<F: Field> EPoint<F> {
    pub fn new(f: &F, coords: [F::Elem; 3]) -> Result<Self> {
        let lead = coords.iter().position(|c| !f.is_zero(c)).ok_or_else(|| {
            Error::NotOnPointScheme("zero vector is not a projective point".into())
        })?;
        let inv = f.inv(&coords[lead]).unwrap();
        let coords = [
            f.mul(&coords[0], &inv),
            f.mul(&coords[1], &inv),
            f.mul(&coords[2], &inv),
        ];
        Ok(EPoint { coords })
    }

    pub fn from_i64(f: &F, coords: [i64; 3]) -> Result<Self> {
        Self::new(
            f,
            [
                f.from_i64(coords[0]),
                f.from_i64(coords[1]),
                f.from_i64(coords[2]),
            ],
        )
    }
}

/// The cubic of E together with the data needed to evaluate sigma.
#[derive(Clone, Debug)]
pub struct PointScheme<F: Field> {
    /// Coefficients of det M(p); for the polynomial family this is the
    /// user-supplied cubic and `degenerate` is set.
    pub cubic: TriPoly<F>,
    pub degenerate: bool,
}

/// Multilinearized relation matrix M(p): row k, column b holds
/// sum_a rel_k[a][b] p_a.
fn relation_matrix_at<F: Field>(
    alg: &GradedAlgebra<F>,
    p: &EPoint<F>,
) -> Matrix<F> {
    let f = &alg.field;
    let rels = alg.relation_tensors();
    let mut m = Matrix::zeros(f, 3, 3);
    for (k, rel) in rels.iter().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                if f.is_zero(&rel[a][b]) {
                    continue;
                }
                let t = f.mul(&rel[a][b], &p.coords[a]);
                m[(k, b)] = f.add(&m[(k, b)], &t);
            }
        }
    }
    m
}

/// Word of a commutative monomial for the polynomial family's cubic.
fn word_exponents(word: &[usize]) -> (u8, u8, u8) {
    let mut e = (0u8, 0u8, 0u8);
    for &j in word {
        match j {
            0 => e.0 += 1,
            1 => e.1 += 1,
            _ => e.2 += 1,
        }
    }
    e
}

/// Builds the point scheme of the algebra.
pub fn point_scheme<F: Field>(alg: &GradedAlgebra<F>) -> Result<PointScheme<F>> {
    let f = &alg.field;
    let rels = alg.relation_tensors();
    // Entries of M(p) as linear forms in p.
    let mut entries: Vec<Vec<TriPoly<F>>> = vec![vec![TriPoly::<F>::new(); 3]; 3];
    for (k, rel) in rels.iter().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                if !f.is_zero(&rel[a][b]) {
                    tri_add_term(f, &mut entries[k][b], var_monomial(a), &rel[a][b]);
                }
            }
        }
    }
    // det by cofactor expansion along the first row.
    let mut det = TriPoly::<F>::new();
    for j in 0..3 {
        let (r, s) = match j {
            0 => ((1, 1), (2, 2)),
            1 => ((1, 0), (2, 2)),
            _ => ((1, 0), (2, 1)),
        };
        let (r2, s2) = match j {
            0 => ((1, 2), (2, 1)),
            1 => ((1, 2), (2, 0)),
            _ => ((1, 1), (2, 0)),
        };
        let minor_pos = tri_mul(f, &entries[r.0][r.1], &entries[s.0][s.1]);
        let minor_neg = tri_mul(f, &entries[r2.0][r2.1], &entries[s2.0][s2.1]);
        let mut minor = minor_pos;
        for (m, c) in minor_neg {
            tri_add_term(f, &mut minor, m, &f.neg(&c));
        }
        let signed = if j == 1 {
            minor
                .into_iter()
                .map(|(m, c)| (m, f.neg(&c)))
                .collect::<TriPoly<F>>()
        } else {
            minor
        };
        let contrib = tri_mul(f, &entries[0][j], &signed);
        for (m, c) in contrib {
            tri_add_term(f, &mut det, m, &c);
        }
    }

    if det.is_empty() {
        if alg.spec.family == Family::Polynomial {
            let g = alg.g();
            let mut cubic = TriPoly::<F>::new();
            for (i, c) in g.coords.iter().enumerate() {
                if !f.is_zero(c) {
                    let word = alg.basis_word(3, i);
                    tri_add_term(f, &mut cubic, word_exponents(&word), c);
                }
            }
            return Ok(PointScheme {
                cubic,
                degenerate: true,
            });
        }
        return Err(Error::IdenticallyZeroDeterminant);
    }
    Ok(PointScheme {
        cubic: det,
        degenerate: false,
    })
}

impl<F: Field> PointScheme<F> {
    pub fn cubic_at(&self, f: &F, p: &EPoint<F>) -> F::Elem {
        let mut acc = f.zero();
        for (&(a, b, c), coeff) in &self.cubic {
            let mut term = coeff.clone();
            for _ in 0..a {
                term = f.mul(&term, &p.coords[0]);
            }
            for _ in 0..b {
                term = f.mul(&term, &p.coords[1]);
            }
            for _ in 0..c {
                term = f.mul(&term, &p.coords[2]);
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    pub fn contains(&self, f: &F, p: &EPoint<F>) -> bool {
        self.degenerate || f.is_zero(&self.cubic_at(f, p))
    }

    /// Cubic coefficients in a stable monomial order (x-exps descending).
    pub fn cubic_coefficients(&self, f: &F) -> Vec<((u8, u8, u8), String)> {
        let mut out: Vec<_> = self
            .cubic
            .iter()
            .map(|(m, c)| (*m, f.fmt_elem(c)))
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }
}

/// sigma(p): the next point of a point module through p, i.e. the kernel
/// direction of M(p). On the degenerate (polynomial) scheme sigma is the
/// identity. Fails where the kernel is not one-dimensional.
pub fn sigma<F: Field>(alg: &GradedAlgebra<F>, scheme: &PointScheme<F>, p: &EPoint<F>) -> Result<EPoint<F>> {
    let f = &alg.field;
    if scheme.degenerate {
        return Ok(p.clone());
    }
    if !scheme.contains(f, p) {
        return Err(Error::NotOnPointScheme(format!(
            "cubic does not vanish at [{}:{}:{}]",
            f.fmt_elem(&p.coords[0]),
            f.fmt_elem(&p.coords[1]),
            f.fmt_elem(&p.coords[2])
        )));
    }
    let m = relation_matrix_at(alg, p);
    let kernel = m.kernel_basis(f);
    if kernel.len() != 1 {
        return Err(Error::NotOnPointScheme(format!(
            "sigma undefined: kernel of M(p) has dimension {}",
            kernel.len()
        )));
    }
    EPoint::new(f, [kernel[0][0].clone(), kernel[0][1].clone(), kernel[0][2].clone()])
}

/// The forward sigma-orbit p, sigma p, ..., of length `len`.
pub fn sigma_orbit<F: Field>(
    alg: &GradedAlgebra<F>,
    scheme: &PointScheme<F>,
    p: &EPoint<F>,
    len: usize,
) -> Result<Vec<EPoint<F>>> {
    let mut orbit = vec![p.clone()];
    for _ in 1..len {
        let next = sigma(alg, scheme, orbit.last().unwrap())?;
        orbit.push(next);
    }
    Ok(orbit)
}

/// All points of P^2(F_q) in a fixed order.
pub fn projective_plane_points<F: Enumerable>(f: &F) -> Vec<EPoint<F>> {
    let q = f.order();
    let mut pts = Vec::new();
    for a in 0..q {
        for b in 0..q {
            pts.push(EPoint {
                coords: [f.one(), f.elem_at(a), f.elem_at(b)],
            });
        }
    }
    for c in 0..q {
        pts.push(EPoint {
            coords: [f.zero(), f.one(), f.elem_at(c)],
        });
    }
    pts.push(EPoint {
        coords: [f.zero(), f.zero(), f.one()],
    });
    pts
}

/// The F_q-points of E.
pub fn enumerate_points<F: Enumerable>(f: &F, scheme: &PointScheme<F>) -> Vec<EPoint<F>> {
    projective_plane_points(f)
        .into_iter()
        .filter(|p| f.is_zero(&scheme.cubic_at(f, p)))
        .collect()
}

/// The point module of p: one-dimensional in every degree, with the action
/// in degree d given by the coordinates of sigma^d(p).
pub fn point_module<F: Field>(
    alg: &GradedAlgebra<F>,
    scheme: &PointScheme<F>,
    p: &EPoint<F>,
) -> Result<ModulePresentation<F>> {
    let f = &alg.field;
    let hi = alg.degree_bound() as i64;
    let orbit = sigma_orbit(alg, scheme, p, hi as usize + 1)?;
    let dims = vec![1usize; hi as usize + 1];
    let mut acts = Vec::new();
    for d in 0..hi as usize {
        let pd = &orbit[d];
        let mats: [Matrix<F>; 3] = std::array::from_fn(|j| {
            Matrix::new(1, 1, vec![pd.coords[j].clone()])
        });
        acts.push(mats);
    }
    let _ = f;
    Ok(ModulePresentation::from_data(DegreewiseModule::new(
        0, hi, dims, acts,
    )))
}

/// Evaluation functionals of the point module: phi_d in (S_d)^*, with
/// phi_d(s) the coefficient of e_0 . s on e_d.
fn point_functionals<F: Field>(
    alg: &GradedAlgebra<F>,
    orbit: &[EPoint<F>],
    hi: usize,
) -> Vec<Vec<F::Elem>> {
    let f = &alg.field;
    let mut phis: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for d in 1..=hi {
        let mut phi = vec![f.zero(); alg.dim(d as i64)];
        for (i, slot) in phi.iter_mut().enumerate() {
            let (m, k) = alg.basis_parent(d, i);
            *slot = f.mul(&phis[d - 1][m], &orbit[d - 1].coords[k]);
        }
        phis.push(phi);
    }
    phis
}

/// The ideal of k distinct points: the kernel of O -> direct sum of their
/// point modules, realized degreewise as a submodule of O.
pub fn ideal_of_points<F: Field>(
    alg: &GradedAlgebra<F>,
    scheme: &PointScheme<F>,
    points: &[EPoint<F>],
) -> Result<ModulePresentation<F>> {
    let f = &alg.field;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::PointsNotDistinct);
            }
        }
    }
    let hi = alg.degree_bound() as i64;
    if points.is_empty() {
        return ModulePresentation::from_free(alg, vec![0]);
    }
    let mut all_phis = Vec::new();
    for p in points {
        let orbit = sigma_orbit(alg, scheme, p, hi as usize + 1)?;
        all_phis.push(point_functionals(alg, &orbit, hi as usize));
    }
    // Kernel bases per degree.
    let mut basis = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=hi as usize {
        let rows: Vec<Vec<F::Elem>> = all_phis.iter().map(|phis| phis[d].clone()).collect();
        let m = Matrix::from_rows(f, alg.dim(d as i64), &rows);
        let ker = m.kernel_basis(f);
        dims.push(ker.len());
        basis.push(Matrix::from_cols(f, alg.dim(d as i64), &ker));
    }
    let mut acts = Vec::new();
    for d in 0..hi as usize {
        let b_d = &basis[d];
        let b_d1 = &basis[d + 1];
        let mut mats = Vec::new();
        for j in 0..3 {
            let img = alg.right_mult_var(d, j).mul(f, b_d);
            let m = if b_d1.cols() == 0 {
                Matrix::zeros(f, 0, b_d.cols())
            } else {
                b_d1
                    .solve(f, &img)
                    .expect("ideal is closed under the action")
            };
            mats.push(m);
        }
        acts.push([mats[0].clone(), mats[1].clone(), mats[2].clone()]);
    }
    Ok(ModulePresentation::from_data(DegreewiseModule::new(
        0, hi, dims, acts,
    )))
}

/// Hilbert function of M/Mg over the window where it is defined, after
/// certifying that g acts without kernel degreewise.
pub fn restrict_to_e<F: Field>(
    alg: &GradedAlgebra<F>,
    module: &ModulePresentation<F>,
) -> Result<Vec<(i64, usize)>> {
    let f = &alg.field;
    let data = &module.data;
    let g = alg.g();
    let mut table = Vec::new();
    for d in data.lo()..=data.hi() {
        if d - 3 >= data.lo() {
            let act_g = data.act_by_element(alg, g, d - 3)?;
            let rank = act_g.rank(f);
            if rank != act_g.cols() {
                return Err(Error::GNotInjective(format!(
                    "kernel of g in degree {}",
                    d - 3
                )));
            }
            table.push((d, data.dim(d) - rank));
        } else {
            table.push((d, data.dim(d)));
        }
    }
    Ok(table)
}

/// (dim S_i, dim B_i): equal for i <= 2, diverging from i = 3 on.
pub fn sigma_hom_dims<F: Field>(alg: &GradedAlgebra<F>, i: i64) -> Result<(usize, usize)> {
    Ok((alg.hilbert_function(i)?, alg.quotient_b_dim(i)?))
}

/// Samples k points of E(F_q) that are pairwise distinct and whose
/// sigma-orbits stay disjoint down the window; redraws on degeneracy.
pub fn sample_generic_points<F: Enumerable>(
    alg: &GradedAlgebra<F>,
    scheme: &PointScheme<F>,
    k: usize,
    rng: &mut impl Rng,
) -> Result<Vec<EPoint<F>>> {
    let f = &alg.field;
    let all = enumerate_points(f, scheme);
    if all.len() < k {
        return Err(Error::NotOnPointScheme(format!(
            "point scheme has only {} rational points, need {k}",
            all.len()
        )));
    }
    let depth = alg.degree_bound() + 1;
    'attempt: for _ in 0..200 {
        let mut chosen: Vec<EPoint<F>> = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        while chosen.len() < k {
            let i = rng.gen_range(0..all.len());
            if used.insert(i) {
                chosen.push(all[i].clone());
            }
            if used.len() == all.len() && chosen.len() < k {
                continue 'attempt;
            }
        }
        // Orbits must exist and stay pairwise disjoint.
        let mut orbits = Vec::new();
        for p in &chosen {
            match sigma_orbit(alg, scheme, p, depth) {
                Ok(o) => orbits.push(o),
                Err(_) => continue 'attempt,
            }
        }
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                if orbits[a].iter().any(|q| *q == chosen[b]) {
                    continue 'attempt;
                }
            }
        }
        return Ok(chosen);
    }
    Err(Error::NotOnPointScheme(
        "could not sample generic points without orbit collisions".into(),
    ))
}

/// Membership report for the module M = {t : (z+y) t in (x+z) T} in the
/// q-deformed ring with parameters (p, 1, 1).
#[derive(Clone, Debug, serde::Serialize)]
pub struct MembershipReport {
    pub alpha_in_m: bool,
    pub beta_in_m: bool,
    /// For each x-degree-one probe x z^i, whether some completion
    /// x z^i + r with r in k[y,z] lies in M (expected false).
    pub xz_completions: Vec<(usize, bool)>,
}

/// Runs the membership computations defining the counterexample module.
pub fn counterexample_module<F: Field>(
    alg: &GradedAlgebra<F>,
    max_degree: usize,
) -> Result<MembershipReport> {
    if alg.spec.family != Family::QDeform {
        return Err(Error::Usage(
            "counterexample module lives over the q-deformed family".into(),
        ));
    }
    let f = &alg.field;
    let p = f.from_i64(alg.spec.params[0]);
    let zy = alg.add_elems(&alg.var(2), &alg.var(1)); // z + y
    let xz = alg.add_elems(&alg.var(0), &alg.var(2)); // x + z

    let in_m = |t: &AlgebraElement<F>| -> Result<bool> {
        let d = t.degree;
        let lhs = alg.left_mul_matrix(&zy, d)?.mul_vec(f, &t.coords);
        let rhs = alg.left_mul_matrix(&xz, d)?;
        let b = Matrix::from_cols(f, lhs.len(), &[lhs]);
        Ok(rhs.solve(f, &b).is_some())
    };

    // alpha = x^2 + x(1+p)z + p z^2 and beta = x(z+y) + z(z+py).
    let one_plus_p = f.add(&f.one(), &p);
    let xx = alg.word_to_element(&[0, 0])?;
    let xz_w = alg.word_to_element(&[0, 2])?;
    let zz = alg.word_to_element(&[2, 2])?;
    let alpha = alg.add_elems(
        &alg.add_elems(&xx, &alg.scale_elem(&xz_w, &one_plus_p)),
        &alg.scale_elem(&zz, &p),
    );
    let xy = alg.word_to_element(&[0, 1])?;
    let zy_w = alg.word_to_element(&[2, 1])?;
    let beta = alg.add_elems(
        &alg.add_elems(&xz_w, &xy),
        &alg.add_elems(&zz, &alg.scale_elem(&zy_w, &p)),
    );

    let alpha_in_m = in_m(&alpha)?;
    let beta_in_m = in_m(&beta)?;

    // Probe x z^i + r for r in k[y,z]: solvable iff some combination of the
    // y,z-monomial columns and an (x+z)-multiple matches -(z+y) x z^i.
    let mut xz_completions = Vec::new();
    for i in 0..max_degree {
        let d = i + 1;
        if d + 1 > alg.degree_bound() {
            break;
        }
        let mut word = vec![0usize];
        word.extend(std::iter::repeat(2).take(i));
        let probe = alg.word_to_element(&word)?;
        let lhs_vec = alg.left_mul_matrix(&zy, d)?.mul_vec(f, &probe.coords);
        let neg_lhs: Vec<F::Elem> = lhs_vec.iter().map(|x| f.neg(x)).collect();
        // Columns: (z+y) * (y^a z^b) for a+b = d, then -(x+z) * T_d.
        let mut cols: Vec<Vec<F::Elem>> = Vec::new();
        let l_zy = alg.left_mul_matrix(&zy, d)?;
        for a in 0..=d {
            let mut w = vec![1usize; a];
            w.extend(std::iter::repeat(2).take(d - a));
            let r = alg.word_to_element(&w)?;
            cols.push(l_zy.mul_vec(f, &r.coords));
        }
        let l_xz = alg.left_mul_matrix(&xz, d)?;
        for c in 0..l_xz.cols() {
            cols.push(l_xz.col_vec(c).iter().map(|x| f.neg(x)).collect());
        }
        let a = Matrix::from_cols(f, lhs_vec.len(), &cols);
        let b = Matrix::from_cols(f, neg_lhs.len(), &[neg_lhs]);
        xz_completions.push((i, a.solve(f, &b).is_some()));
    }

    Ok(MembershipReport {
        alpha_in_m,
        beta_in_m,
        xz_completions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, AlgebraSpec, Family};
    use crate::field::{FieldSpec, PrimeField, Rationals};
    use rand::SeedableRng;

    fn skl(d: usize) -> GradedAlgebra<PrimeField> {
        let spec = AlgebraSpec::new(FieldSpec::prime(101), Family::Sklyanin, vec![1, 2, 3])
            .with_degree_bound(d);
        build_algebra(PrimeField::new(101).unwrap(), &spec).unwrap()
    }

    fn weyl(d: usize) -> GradedAlgebra<PrimeField> {
        let spec = AlgebraSpec::new(FieldSpec::prime(101), Family::HomogenizedWeyl, vec![])
            .with_degree_bound(d);
        build_algebra(PrimeField::new(101).unwrap(), &spec).unwrap()
    }

    #[test]
    fn weyl_point_scheme_is_triple_line() {
        let alg = weyl(4);
        let scheme = point_scheme(&alg).unwrap();
        // det M(p) proportional to z^3.
        assert_eq!(scheme.cubic.len(), 1);
        assert!(scheme.cubic.contains_key(&(0, 0, 3)));
    }

    #[test]
    fn polynomial_scheme_is_degenerate_with_user_cubic() {
        let spec = AlgebraSpec::new(FieldSpec::rationals(), Family::Polynomial, vec![])
            .with_cubic_g(&[("xyz", 1)]);
        let alg = build_algebra(Rationals, &spec).unwrap();
        let scheme = point_scheme(&alg).unwrap();
        assert!(scheme.degenerate);
        assert!(scheme.cubic.contains_key(&(1, 1, 1)));
    }

    #[test]
    fn sklyanin_cubic_matches_brute_force_solvability() {
        let alg = skl(4);
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        assert!(!scheme.degenerate);
        let mut on_curve = 0;
        for p in projective_plane_points(f) {
            let vanishes = f.is_zero(&scheme.cubic_at(f, &p));
            let m = relation_matrix_at(&alg, &p);
            let solvable = m.rank(f) < 3;
            assert_eq!(vanishes, solvable, "disagreement at {:?}", p);
            if vanishes {
                on_curve += 1;
            }
        }
        // Hasse bound for a plane cubic over F_101.
        assert!(on_curve >= 82 && on_curve <= 122, "|E(F_101)| = {on_curve}");
    }

    #[test]
    fn sigma_is_a_bijection_on_e_points() {
        let alg = skl(4);
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        let pts = enumerate_points(f, &scheme);
        let mut images = Vec::new();
        for p in &pts {
            let q = sigma(&alg, &scheme, p).unwrap();
            assert!(scheme.contains(f, &q), "sigma left the curve");
            images.push(q);
        }
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                assert!(images[i] != images[j], "sigma not injective");
            }
        }
    }

    #[test]
    fn point_module_has_constant_hilbert_function_and_koszul_resolution() {
        let alg = skl(9);
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        let p = enumerate_points(f, &scheme)[0].clone();
        let mut pm = point_module(&alg, &scheme, &p).unwrap();
        for d in 0..=6 {
            assert_eq!(pm.hilbert(d).unwrap(), 1);
        }
        let res = pm.resolution(&alg).unwrap();
        let twists: Vec<Vec<i64>> = res.steps.iter().map(|s| s.twists.clone()).collect();
        assert_eq!(twists, vec![vec![0], vec![-1, -1], vec![-2]]);
        assert_eq!(pm.invariants(&alg).unwrap().triple(), (0, 0, 1));
        let table = pm.cohomology_table(&alg, [0]).unwrap();
        assert_eq!(table.rows[0], (0, 1, 0, 0));
    }

    #[test]
    fn polynomial_point_module_at_origin_is_structure_quotient() {
        let spec = AlgebraSpec::new(FieldSpec::rationals(), Family::Polynomial, vec![])
            .with_cubic_g(&[("xyz", 1)])
            .with_degree_bound(8);
        let alg = build_algebra(Rationals, &spec).unwrap();
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        let p = EPoint::from_i64(f, [0, 0, 1]).unwrap();
        let mut pm = point_module(&alg, &scheme, &p).unwrap();
        // S/(x,y): the x and y actions vanish identically.
        for d in 0..4 {
            assert!(pm.data.act(d, 0).is_zero(f));
            assert!(pm.data.act(d, 1).is_zero(f));
        }
        assert_eq!(pm.invariants(&alg).unwrap().triple(), (0, 0, 1));
    }

    #[test]
    fn ideals_of_points_have_expected_invariants() {
        let alg = skl(10);
        let scheme = point_scheme(&alg).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 1..=3usize {
            let pts = sample_generic_points(&alg, &scheme, k, &mut rng).unwrap();
            let mut ideal = ideal_of_points(&alg, &scheme, &pts).unwrap();
            assert_eq!(
                ideal.invariants(&alg).unwrap().triple(),
                (1, 0, 1 - k as i64),
                "k = {k}"
            );
            for d in 1..=6i64 {
                assert_eq!(
                    ideal.hilbert(d).unwrap(),
                    ((d + 1) * (d + 2) / 2) as usize - k
                );
            }
            let rep = ideal.verify_vanishing_condition(&alg).unwrap();
            assert!(rep.satisfied);
            assert_eq!(rep.beilinson, (k, k));
        }
    }

    #[test]
    fn empty_ideal_is_o() {
        let alg = skl(6);
        let scheme = point_scheme(&alg).unwrap();
        let mut o = ideal_of_points(&alg, &scheme, &[]).unwrap();
        assert_eq!(o.invariants(&alg).unwrap().triple(), (1, 0, 1));
    }

    #[test]
    fn duplicate_points_rejected() {
        let alg = skl(6);
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        let p = enumerate_points(f, &scheme)[0].clone();
        let err = ideal_of_points(&alg, &scheme, &[p.clone(), p]).unwrap_err();
        assert_eq!(err.kind(), "points_not_distinct");
    }

    #[test]
    fn restriction_of_o_gives_b_dimensions() {
        let alg = skl(8);
        let o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        let table = restrict_to_e(&alg, &o).unwrap();
        for (d, dim) in table {
            let expect = if d == 0 {
                1
            } else if d > 0 {
                3 * d as usize
            } else {
                0
            };
            assert_eq!(dim, expect, "degree {d}");
        }
    }

    #[test]
    fn restriction_of_two_point_ideal_stabilizes_at_3d() {
        let alg = skl(10);
        let scheme = point_scheme(&alg).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pts = sample_generic_points(&alg, &scheme, 2, &mut rng).unwrap();
        let ideal = ideal_of_points(&alg, &scheme, &pts).unwrap();
        let table = restrict_to_e(&alg, &ideal).unwrap();
        // Degreewise difference: below d = 4 the Hilbert function of the
        // ideal still differs from its polynomial, so the restriction only
        // stabilizes to the 3d line from there on.
        for (d, dim) in table {
            if d >= 4 {
                assert_eq!(dim, 3 * d as usize, "degree {d}");
            } else if d == 2 {
                assert_eq!(dim, 4);
            } else if d == 3 {
                assert_eq!(dim, 8);
            }
        }
    }

    #[test]
    fn torsion_module_fails_g_injectivity() {
        let alg = skl(8);
        let f = &alg.field;
        let scheme = point_scheme(&alg).unwrap();
        let p = enumerate_points(f, &scheme)[0].clone();
        let pm = point_module(&alg, &scheme, &p).unwrap();
        // A point module is g-torsion: restriction must refuse it...
        // unless g acts injectively on the 1-dim pieces, which cannot happen
        // for all degrees since g vanishes on E.
        let err = restrict_to_e(&alg, &pm).unwrap_err();
        assert_eq!(err.kind(), "g_not_injective");
    }

    #[test]
    fn sigma_hom_dims_witness() {
        let alg = skl(6);
        assert_eq!(sigma_hom_dims(&alg, 0).unwrap(), (1, 1));
        assert_eq!(sigma_hom_dims(&alg, 1).unwrap(), (3, 3));
        assert_eq!(sigma_hom_dims(&alg, 2).unwrap(), (6, 6));
        assert_eq!(sigma_hom_dims(&alg, 3).unwrap(), (10, 9));
    }

    #[test]
    fn counterexample_membership() {
        let spec = AlgebraSpec::new(FieldSpec::rationals(), Family::QDeform, vec![2, 1, 1])
            .with_degree_bound(8);
        let alg = build_algebra(Rationals, &spec).unwrap();
        let report = counterexample_module(&alg, 6).unwrap();
        assert!(report.alpha_in_m);
        assert!(report.beta_in_m);
        assert_eq!(report.xz_completions.len(), 6);
        for (i, solvable) in report.xz_completions {
            assert!(!solvable, "xz^{i} + r unexpectedly in M");
        }
    }
}
