//! ADHM quadruples on the homogenized Weyl plane: the moment-map equation,
//! the monad they generate, and the framing check on the line z = 0.
//!
//! The constant in the moment-map equation depends on the normalization of
//! the Weyl relation, so it is calibrated from the algebra itself: expanding
//! B.A for the scalar datum shows B.A = z^2 (kappa 1 + [b1,b2] + ij), and
//! kappa is read off the zero datum. Under xy - yx = z^2 this gives
//! kappa = 1.

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::kronecker::{build_complex, KroneckerComplex};
use crate::matrix::{Matrix, Subspace};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct AdhmDatum<F: Field> {
    pub n: usize,
    pub r: usize,
    pub b1: Matrix<F>,
    pub b2: Matrix<F>,
    pub i: Matrix<F>,
    pub j: Matrix<F>,
}

impl<F: Field> AdhmDatum<F> {
    pub fn new(
        n: usize,
        r: usize,
        b1: Matrix<F>,
        b2: Matrix<F>,
        i: Matrix<F>,
        j: Matrix<F>,
    ) -> Result<Self> {
        if (b1.rows(), b1.cols()) != (n, n)
            || (b2.rows(), b2.cols()) != (n, n)
            || (i.rows(), i.cols()) != (n, r)
            || (j.rows(), j.cols()) != (r, n)
        {
            return Err(Error::ShapeMismatch(format!(
                "ADHM datum needs b1, b2 of size {n}x{n}, i of size {n}x{r}, j of size {r}x{n}"
            )));
        }
        Ok(AdhmDatum { n, r, b1, b2, i, j })
    }
}

/// The matrices of the standard complex attached to a datum.
fn standard_maps<F: Field>(
    f: &F,
    d: &AdhmDatum<F>,
) -> ([Matrix<F>; 3], [Matrix<F>; 3]) {
    let (n, r) = (d.n, d.r);
    let mid = 2 * n + r;
    // A = (1; 0; 0) x + (0; 1; 0) y + (b1; b2; j) z.
    let mut ax = Matrix::zeros(f, mid, n);
    let mut ay = Matrix::zeros(f, mid, n);
    let mut az = Matrix::zeros(f, mid, n);
    for k in 0..n {
        ax[(k, k)] = f.one();
        ay[(n + k, k)] = f.one();
    }
    for row in 0..n {
        for col in 0..n {
            az[(row, col)] = d.b1[(row, col)].clone();
            az[(n + row, col)] = d.b2[(row, col)].clone();
        }
    }
    for row in 0..r {
        for col in 0..n {
            az[(2 * n + row, col)] = d.j[(row, col)].clone();
        }
    }
    // B = x (0 1 0) + y (-1 0 0) + z (-b2 b1 i).
    let mut bx = Matrix::zeros(f, n, mid);
    let mut by = Matrix::zeros(f, n, mid);
    let mut bz = Matrix::zeros(f, n, mid);
    for k in 0..n {
        bx[(k, n + k)] = f.one();
        by[(k, k)] = f.neg(&f.one());
    }
    for row in 0..n {
        for col in 0..n {
            bz[(row, col)] = f.neg(&d.b2[(row, col)]);
            bz[(row, n + col)] = d.b1[(row, col)].clone();
        }
        for col in 0..r {
            bz[(row, 2 * n + col)] = d.i[(row, col)].clone();
        }
    }
    ([ax, ay, az], [bx, by, bz])
}

/// Calibrates the moment-map constant from the algebra: the unique scalar
/// with B.A = 0 iff [b1,b2] + ij + kappa = 0. Works for any normalization
/// of the Weyl-type relation (rescaling z^2 rescales kappa).
pub fn calibrate_kappa<F: Field>(alg: &GradedAlgebra<F>) -> Result<F::Elem> {
    let f = &alg.field;
    let zero_datum = AdhmDatum::new(
        1,
        1,
        Matrix::zeros(f, 1, 1),
        Matrix::zeros(f, 1, 1),
        Matrix::zeros(f, 1, 1),
        Matrix::zeros(f, 1, 1),
    )?;
    let unit_datum = AdhmDatum::new(
        1,
        1,
        Matrix::zeros(f, 1, 1),
        Matrix::zeros(f, 1, 1),
        Matrix::identity(f, 1),
        Matrix::identity(f, 1),
    )?;
    // B.A for a 1x1 datum, as an element of S_2.
    let ba = |d: &AdhmDatum<F>| -> Result<Vec<F::Elem>> {
        let (a, b) = standard_maps(f, d);
        let dim2 = alg.dim(2);
        let mut out = vec![f.zero(); dim2];
        for u in 0..3 {
            for v in 0..3 {
                let mut coeff = f.zero();
                for h in 0..3 {
                    let t = f.mul(&b[u][(0, h)], &a[v][(h, 0)]);
                    coeff = f.add(&coeff, &t);
                }
                if f.is_zero(&coeff) {
                    continue;
                }
                let m = alg.word_to_element(&[u, v])?;
                for (t, x) in m.coords.iter().enumerate() {
                    let s = f.mul(&coeff, x);
                    out[t] = f.add(&out[t], &s);
                }
            }
        }
        Ok(out)
    };
    let v = ba(&zero_datum)?; // kappa * z^2
    let w_full = ba(&unit_datum)?; // (kappa + 1) * z^2
    let w: Vec<F::Elem> = w_full
        .iter()
        .zip(&v)
        .map(|(x, y)| f.sub(x, y))
        .collect(); // z^2 coefficient of the ij term
    let lead = w.iter().position(|x| !f.is_zero(x)).ok_or_else(|| {
        Error::DegenerateParameters(
            "algebra does not have a Weyl-type relation: ij leaves B.A unchanged".into(),
        )
    })?;
    let kappa = f.div(&v[lead], &w[lead]);
    // v must be exactly kappa * w.
    for (x, y) in v.iter().zip(&w) {
        if *x != f.mul(&kappa, y) {
            return Err(Error::DegenerateParameters(
                "B.A of the zero datum is not proportional to the ij coefficient".into(),
            ));
        }
    }
    Ok(kappa)
}

/// Residual [b1,b2] + ij + kappa; valid iff it vanishes.
pub fn validate_adhm<F: Field>(
    f: &F,
    d: &AdhmDatum<F>,
    kappa: &F::Elem,
) -> (bool, Matrix<F>) {
    let comm = d.b1.mul(f, &d.b2).sub(f, &d.b2.mul(f, &d.b1));
    let residual = comm
        .add(f, &d.i.mul(f, &d.j))
        .add(f, &Matrix::identity(f, d.n).scale(f, kappa));
    (residual.is_zero(f), residual)
}

/// The Kronecker complex of a valid datum; shape (n, 2n + r, n).
pub fn monad_from_adhm<F: Field>(
    alg: &GradedAlgebra<F>,
    d: &AdhmDatum<F>,
    kappa: &F::Elem,
) -> Result<KroneckerComplex<F>> {
    let f = &alg.field;
    let (ok, residual) = validate_adhm(f, d, kappa);
    if !ok {
        let mut entries = Vec::new();
        for i in 0..residual.rows() {
            for j in 0..residual.cols() {
                if !f.is_zero(&residual[(i, j)]) {
                    entries.push(format!("({i},{j}) = {}", f.fmt_elem(&residual[(i, j)])));
                }
            }
        }
        return Err(Error::NotAComplex(format!(
            "moment-map residual is nonzero at {}",
            entries.join(", ")
        )));
    }
    let (a, b) = standard_maps(f, d);
    build_complex(alg, a, b)
}

/// Degree-d piece dimension of k[x,y].
fn xy_dim(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        d as usize + 1
    }
}

/// Multiplication by x (var 0) or y (var 1) on k[x,y]_d, basis x^a y^(d-a).
fn xy_mult<F: Field>(f: &F, d: usize, var: usize) -> Matrix<F> {
    let mut m = Matrix::zeros(f, d + 2, d + 1);
    for a in 0..=d {
        let target = if var == 0 { a + 1 } else { a };
        m[(target, a)] = f.one();
    }
    m
}

/// Framing check: substitute z = 0, compute the middle cohomology of the
/// restricted complex over k[x,y] degreewise, and test that it is free of
/// rank r (Hilbert function r(d+1), all generators in degree 0).
pub fn check_framing<F: Field>(
    alg: &GradedAlgebra<F>,
    k: &KroneckerComplex<F>,
    r: usize,
) -> Result<bool> {
    let f = &alg.field;
    let (a_dim, n_dim, c_dim) = k.dims;
    let bound = alg.degree_bound() as i64 - 1;

    // Degree-d matrix of a coefficient pair (cx, cy) acting blockwise.
    let block_map = |cx: &Matrix<F>, cy: &Matrix<F>, d: i64| -> Matrix<F> {
        let rows = cx.rows();
        let cols = cx.cols();
        let sdim = xy_dim(d);
        let tdim = xy_dim(d + 1);
        let mut out = Matrix::zeros(f, rows * tdim, cols * sdim);
        if sdim == 0 {
            return out;
        }
        let mx = xy_mult(f, d as usize, 0);
        let my = xy_mult(f, d as usize, 1);
        for bi in 0..rows {
            for bj in 0..cols {
                for (coeff, mult) in [(&cx[(bi, bj)], &mx), (&cy[(bi, bj)], &my)] {
                    if f.is_zero(coeff) {
                        continue;
                    }
                    for ti in 0..tdim {
                        for sj in 0..sdim {
                            let t = f.mul(coeff, &mult[(ti, sj)]);
                            out[(bi * tdim + ti, bj * sdim + sj)] =
                                f.add(&out[(bi * tdim + ti, bj * sdim + sj)], &t);
                        }
                    }
                }
            }
        }
        out
    };

    let mut prev_basis: Option<Matrix<F>> = None;
    let mut prev_gen_space: Option<Subspace<F>> = None;
    for d in 0..=bound {
        // A-bar at degree d maps (k[x,y]_{d-1})^a -> (k[x,y]_d)^(n).
        let am = block_map(&k.a[0], &k.a[1], d - 1);
        let bm = block_map(&k.b[0], &k.b[1], d);
        let ker = bm.kernel_basis(f);
        let kb = Matrix::from_cols(f, bm.cols(), &ker);
        let img_in_ker = if kb.cols() == 0 {
            Matrix::zeros(f, 0, am.cols())
        } else {
            kb.solve(f, &am)
                .ok_or_else(|| Error::NotAMonad("restricted pair is not a complex".into()))?
        };
        let im = Subspace::from_cols(f, &img_in_ker);
        let dim_m = kb.cols() - im.dim();
        if dim_m != r * xy_dim(d) {
            return Ok(false);
        }
        // Generated in degree 0: the x/y images of the previous piece span
        // everything from degree 1 on.
        if d > 0 {
            let pb = prev_basis.as_ref().unwrap();
            let prev_im = prev_gen_space.as_ref().unwrap();
            let comp = prev_im.complement();
            let mut span_cols = Vec::new();
            for var in 0..2 {
                let sdim = xy_dim(d - 1);
                let tdim = xy_dim(d);
                let mult = xy_mult(f, (d - 1) as usize, var);
                for &c in &comp {
                    let v = pb.col_vec(c);
                    let mut moved = vec![f.zero(); n_dim * tdim];
                    for bi in 0..n_dim {
                        for ti in 0..tdim {
                            let mut acc = f.zero();
                            for sj in 0..sdim {
                                let t = f.mul(&mult[(ti, sj)], &v[bi * sdim + sj]);
                                acc = f.add(&acc, &t);
                            }
                            moved[bi * tdim + ti] = acc;
                        }
                    }
                    // Express inside ker(B_d) and quotient by im(A_d).
                    let col = Matrix::from_cols(f, moved.len(), &[moved]);
                    let in_ker = kb
                        .solve(f, &col)
                        .ok_or_else(|| Error::NotAMonad("action left the kernel".into()))?;
                    span_cols.push(im.quotient_coords(f, &in_ker.col_vec(0)));
                }
            }
            let span = Matrix::from_cols(f, dim_m, &span_cols);
            if span.rank(f) != dim_m {
                return Ok(false);
            }
        }
        prev_basis = Some(kb);
        prev_gen_space = Some(im);
    }
    let _ = (a_dim, c_dim);
    Ok(true)
}

/// Deterministic valid datum generator (entries sampled from a small integer
/// range through the field). For r >= n, (b1, b2) are free and j solves the
/// linear system against a full-row-rank i. For r < n that system is
/// overdetermined, so b2 is taken diagonal with distinct eigenvalues, the
/// diagonal of ij is scaled to -kappa, and the off-diagonal part of b1
/// absorbs the rest of ij.
pub fn generate_valid_datum<F: Field>(
    f: &F,
    n: usize,
    r: usize,
    kappa: &F::Elem,
    rng: &mut impl Rng,
) -> Result<AdhmDatum<F>> {
    let rand_elem = |rng: &mut dyn rand::RngCore| f.from_i64(rng.gen_range(0..101i64));
    if n == 0 {
        return AdhmDatum::new(
            0,
            r,
            Matrix::zeros(f, 0, 0),
            Matrix::zeros(f, 0, 0),
            Matrix::zeros(f, 0, r),
            Matrix::zeros(f, r, 0),
        );
    }
    if r >= n {
        for _ in 0..100 {
            let b1 = Matrix::from_fn(f, n, n, |_, _| rand_elem(rng));
            let b2 = Matrix::from_fn(f, n, n, |_, _| rand_elem(rng));
            let i = Matrix::from_fn(f, n, r, |_, _| rand_elem(rng));
            if i.rank(f) != n {
                continue;
            }
            let comm = b1.mul(f, &b2).sub(f, &b2.mul(f, &b1));
            let target = comm
                .add(f, &Matrix::identity(f, n).scale(f, kappa))
                .neg(f);
            let Some(j) = i.solve(f, &target) else {
                continue;
            };
            return AdhmDatum::new(n, r, b1, b2, i, j);
        }
    } else {
        'outer: for _ in 0..200 {
            // Distinct eigenvalues for b2.
            let mut lambda = Vec::new();
            for _ in 0..n {
                let v = rand_elem(rng);
                if lambda.contains(&v) {
                    continue 'outer;
                }
                lambda.push(v);
            }
            let i = Matrix::from_fn(f, n, r, |_, _| rand_elem(rng));
            let mut j = Matrix::from_fn(f, r, n, |_, _| rand_elem(rng));
            // Scale the columns of j so that (ij)_kk = -kappa.
            let neg_kappa = f.neg(kappa);
            for col in 0..n {
                let mut diag = f.zero();
                for t in 0..r {
                    let s = f.mul(&i[(col, t)], &j[(t, col)]);
                    diag = f.add(&diag, &s);
                }
                if f.is_zero(&diag) {
                    continue 'outer;
                }
                let scale = f.div(&neg_kappa, &diag);
                for t in 0..r {
                    j[(t, col)] = f.mul(&j[(t, col)], &scale);
                }
            }
            let ij = i.mul(f, &j);
            let mut b1 = Matrix::zeros(f, n, n);
            let mut b2 = Matrix::zeros(f, n, n);
            for k in 0..n {
                b2[(k, k)] = lambda[k].clone();
                b1[(k, k)] = rand_elem(rng);
            }
            for row in 0..n {
                for col in 0..n {
                    if row == col {
                        continue;
                    }
                    let gap = f.sub(&lambda[col], &lambda[row]);
                    b1[(row, col)] = f.div(&f.neg(&ij[(row, col)]), &gap);
                }
            }
            return AdhmDatum::new(n, r, b1, b2, i, j);
        }
    }
    Err(Error::Inconclusive(
        "failed to sample a valid ADHM datum within the attempt budget".into(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdhmReport {
    pub n: usize,
    pub r: usize,
    pub valid: bool,
    pub monad: bool,
    pub invariants: (i64, i64, i64),
    pub framed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, AlgebraSpec, Family};
    use crate::elliptic::{enumerate_points, point_scheme};
    use crate::field::{FieldSpec, PrimeField};
    use crate::kronecker::{complex_invariants, is_monad, monad_cohomology};
    use rand::SeedableRng;

    fn weyl(d: usize) -> GradedAlgebra<PrimeField> {
        let spec = AlgebraSpec::new(FieldSpec::prime(101), Family::HomogenizedWeyl, vec![])
            .with_degree_bound(d);
        build_algebra(PrimeField::new(101).unwrap(), &spec).unwrap()
    }

    #[test]
    fn kappa_is_one_under_this_normalization() {
        let alg = weyl(6);
        let kappa = calibrate_kappa(&alg).unwrap();
        assert_eq!(kappa, 1);
    }

    #[test]
    fn kappa_scales_with_the_relation() {
        // Rescaling z^2 in the Weyl relation rescales kappa accordingly:
        // xy - yx = 5 z^2 gives kappa = 5.
        use crate::algebra::test_support::build_from_relations;
        let f = PrimeField::new(101).unwrap();
        let alg = build_from_relations(f, 6, |rels| {
            // xy - yx - 5 z^2, z central.
            rels[0][0][1] = 1;
            rels[0][1][0] = 100;
            rels[0][2][2] = 101 - 5;
            rels[1][0][2] = 1;
            rels[1][2][0] = 100;
            rels[2][1][2] = 1;
            rels[2][2][1] = 100;
        })
        .unwrap();
        let kappa = calibrate_kappa(&alg).unwrap();
        assert_eq!(kappa, 5);
    }

    #[test]
    fn scalar_datum_examples() {
        let alg = weyl(6);
        let f = &alg.field;
        let kappa = calibrate_kappa(&alg).unwrap();
        // n = r = 1, b = 0, i = 1, j = -kappa: valid.
        let d = AdhmDatum::new(
            1,
            1,
            Matrix::zeros(f, 1, 1),
            Matrix::zeros(f, 1, 1),
            Matrix::identity(f, 1),
            Matrix::identity(f, 1).scale(f, &f.neg(&kappa)),
        )
        .unwrap();
        assert!(validate_adhm(f, &d, &kappa).0);
        // i = j = 0: residual kappa.
        let bad = AdhmDatum::new(
            1,
            1,
            Matrix::zeros(f, 1, 1),
            Matrix::zeros(f, 1, 1),
            Matrix::zeros(f, 1, 1),
            Matrix::zeros(f, 1, 1),
        )
        .unwrap();
        let (ok, residual) = validate_adhm(f, &bad, &kappa);
        assert!(!ok);
        assert_eq!(residual[(0, 0)], kappa);
    }

    #[test]
    fn generated_data_are_valid_and_give_monads() {
        let alg = weyl(8);
        let f = &alg.field;
        let kappa = calibrate_kappa(&alg).unwrap();
        let scheme = point_scheme(&alg).unwrap();
        let pts = enumerate_points(f, &scheme);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (n, r) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (0, 2)] {
            let d = generate_valid_datum(f, n, r, &kappa, &mut rng).unwrap();
            assert!(validate_adhm(f, &d, &kappa).0, "(n,r)=({n},{r})");
            let k = monad_from_adhm(&alg, &d, &kappa).unwrap();
            assert_eq!(k.dims, (n, 2 * n + r, n));
            assert_eq!(
                complex_invariants(&k),
                (r as i64, 0, r as i64 - n as i64)
            );
            let rep = is_monad(&alg, &k, &pts).unwrap();
            assert!(rep.monad, "(n,r)=({n},{r})");
            let mut coh = monad_cohomology(&alg, &k).unwrap();
            assert_eq!(
                coh.invariants(&alg).unwrap().triple(),
                (r as i64, 0, r as i64 - n as i64)
            );
            assert!(check_framing(&alg, &k, r).unwrap(), "(n,r)=({n},{r})");
        }
    }

    #[test]
    fn complex_condition_iff_moment_map() {
        let alg = weyl(6);
        let f = &alg.field;
        let kappa = calibrate_kappa(&alg).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        use rand::Rng;
        for trial in 0..60 {
            let n = rng.gen_range(1..=3usize);
            let r = rng.gen_range(1..=2usize);
            let d = AdhmDatum::new(
                n,
                r,
                Matrix::from_fn(f, n, n, |_, _| rng.gen_range(0..101)),
                Matrix::from_fn(f, n, n, |_, _| rng.gen_range(0..101)),
                Matrix::from_fn(f, n, r, |_, _| rng.gen_range(0..101)),
                Matrix::from_fn(f, r, n, |_, _| rng.gen_range(0..101)),
            )
            .unwrap();
            let valid = validate_adhm(f, &d, &kappa).0;
            let (a, b) = super::standard_maps(f, &d);
            let built = crate::kronecker::build_complex(&alg, a, b);
            assert_eq!(built.is_ok(), valid, "trial {trial}");
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let f = PrimeField::new(101).unwrap();
        let err = AdhmDatum::new(
            2,
            1,
            Matrix::zeros(&f, 2, 2),
            Matrix::zeros(&f, 2, 1),
            Matrix::zeros(&f, 2, 1),
            Matrix::zeros(&f, 1, 2),
        )
        .unwrap_err();
        assert_eq!(err.kind(), "shape_mismatch");
    }
}
