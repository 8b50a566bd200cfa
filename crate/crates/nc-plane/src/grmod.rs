//! Finitely generated graded right modules, handled strictly degreewise up
//! to the algebra's bound: presentations, minimal free resolutions, the
//! invariants (rank, c_1, chi), Hilbert polynomials and cohomology tables.
//!
//! Cohomology of a module is the hypercohomology of its resolution. Twisted
//! frees have no middle cohomology, so only two rows survive: the H^0 row
//! with multiplication matrices and the H^2 row with their duals under the
//! Serre pairing. For length-3 resolutions the remaining differential from
//! position (-3,2) to (0,0) is injective because the complex resolves a
//! module, which pins the corner dimensions without computing the map.

use crate::algebra::{AlgebraElement, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{Matrix, Subspace};
use num::rational::Rational64;
use serde::Serialize;

/// dim H^0(O(m)) in closed form; valid in every degree.
pub fn h0_twist(m: i64) -> usize {
    if m >= 0 {
        ((m + 1) * (m + 2) / 2) as usize
    } else {
        0
    }
}

/// dim H^2(O(m)) = dim H^0(O(-3-m)) by Serre duality.
pub fn h2_twist(m: i64) -> usize {
    h0_twist(-3 - m)
}

/// chi(O(m)) = (m+1)(m+2)/2 with sign, valid for all m.
pub fn chi_twist(m: i64) -> i64 {
    (m + 1) * (m + 2) / 2
}

/// A finite direct sum of shifts, written by its twist list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedFree {
    pub twists: Vec<i64>,
}

impl TwistedFree {
    pub fn new(twists: Vec<i64>) -> Self {
        TwistedFree { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// dim of the degree-d piece, using the closed-form Hilbert function.
    pub fn piece_dim(&self, d: i64) -> usize {
        self.twists.iter().map(|m| h0_twist(m + d)).sum()
    }

    pub fn piece_offsets(&self, d: i64) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.twists.len() + 1);
        let mut acc = 0;
        for m in &self.twists {
            offs.push(acc);
            acc += h0_twist(m + d);
        }
        offs.push(acc);
        offs
    }
}

/// A map between twisted frees: entry (i, j) is a homogeneous element of
/// degree target_i - source_j acting by left multiplication, `None` where
/// that degree is negative or the entry is zero.
#[derive(Clone, Debug)]
pub struct GradedMap<F: Field> {
    pub source: TwistedFree,
    pub target: TwistedFree,
    pub entries: Vec<Vec<Option<AlgebraElement<F>>>>,
}

impl<F: Field> GradedMap<F> {
    pub fn new(
        source: TwistedFree,
        target: TwistedFree,
        entries: Vec<Vec<Option<AlgebraElement<F>>>>,
    ) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::ShapeMismatch(
                "entry matrix shape does not match twist lists".into(),
            ));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let Some(e) = e {
                    let want = target.twists[i] - source.twists[j];
                    if want < 0 || e.degree as i64 != want {
                        return Err(Error::ShapeMismatch(format!(
                            "entry ({i},{j}) has degree {} but needs {want}",
                            e.degree
                        )));
                    }
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            entries,
        })
    }

    /// The degree-d component as one scalar matrix.
    pub fn degree_matrix(&self, alg: &GradedAlgebra<F>, d: i64) -> Result<Matrix<F>> {
        let f = &alg.field;
        let src_offs = self.source.piece_offsets(d);
        let tgt_offs = self.target.piece_offsets(d);
        let mut out = Matrix::zeros(f, *tgt_offs.last().unwrap(), *src_offs.last().unwrap());
        for (i, row) in self.entries.iter().enumerate() {
            let tdim = tgt_offs[i + 1] - tgt_offs[i];
            if tdim == 0 {
                continue;
            }
            for (j, entry) in row.iter().enumerate() {
                let sdim = src_offs[j + 1] - src_offs[j];
                if sdim == 0 {
                    continue;
                }
                let Some(e) = entry else { continue };
                let sdeg = self.source.twists[j] + d;
                alg.check_degree(self.target.twists[i] + d)
                    .map_err(|_| Error::DegreeBoundTooSmall(format!(
                        "map component at degree {} exceeds the algebra bound {}",
                        self.target.twists[i] + d,
                        alg.degree_bound()
                    )))?;
                let block = alg.left_mul_matrix(e, sdeg as usize)?;
                for bi in 0..tdim {
                    for bj in 0..sdim {
                        out[(tgt_offs[i] + bi, src_offs[j] + bj)] = block[(bi, bj)].clone();
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Right multiplication by x_j on the degree-d piece of a twisted free.
pub fn free_var_action<F: Field>(
    alg: &GradedAlgebra<F>,
    free: &TwistedFree,
    d: i64,
    j: usize,
) -> Result<Matrix<F>> {
    let f = &alg.field;
    let src_offs = free.piece_offsets(d);
    let tgt_offs = free.piece_offsets(d + 1);
    let mut out = Matrix::zeros(f, *tgt_offs.last().unwrap(), *src_offs.last().unwrap());
    for (i, m) in free.twists.iter().enumerate() {
        let sdim = src_offs[i + 1] - src_offs[i];
        if sdim == 0 {
            continue;
        }
        let e = m + d;
        alg.check_degree(e + 1)?;
        let block = alg.right_mult_var(e as usize, j);
        for bi in 0..block.rows() {
            for bj in 0..sdim {
                out[(tgt_offs[i] + bi, src_offs[i] + bj)] = block[(bi, bj)].clone();
            }
        }
    }
    Ok(out)
}

/// A graded module realized by its degree pieces and variable actions over a
/// finite degree window.
#[derive(Clone, Debug)]
pub struct DegreewiseModule<F: Field> {
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    /// acts[d - lo][j]: M_d -> M_{d+1}, defined for lo <= d < hi.
    acts: Vec<[Matrix<F>; 3]>,
}

impl<F: Field> DegreewiseModule<F> {
    pub fn new(lo: i64, hi: i64, dims: Vec<usize>, acts: Vec<[Matrix<F>; 3]>) -> Self {
        assert_eq!(dims.len() as i64, hi - lo + 1);
        assert_eq!(acts.len() as i64, hi - lo);
        DegreewiseModule { lo, hi, dims, acts }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    pub fn hilbert(&self, d: i64) -> Result<usize> {
        if d > self.hi {
            return Err(Error::DegreeOverflow {
                requested: d,
                bound: self.hi.max(0) as usize,
            });
        }
        Ok(self.dim(d))
    }

    pub fn act(&self, d: i64, j: usize) -> &Matrix<F> {
        assert!(d >= self.lo && d < self.hi, "action degree out of window");
        &self.acts[(d - self.lo) as usize][j]
    }

    /// Action of a homogeneous algebra element: M_d -> M_{d + deg e}.
    pub fn act_by_element(
        &self,
        alg: &GradedAlgebra<F>,
        e: &AlgebraElement<F>,
        d: i64,
    ) -> Result<Matrix<F>> {
        let f = &alg.field;
        if d + (e.degree as i64) > self.hi {
            return Err(Error::DegreeOverflow {
                requested: d + e.degree as i64,
                bound: self.hi.max(0) as usize,
            });
        }
        let mut out = Matrix::zeros(f, self.dim(d + e.degree as i64), self.dim(d));
        for (i, c) in e.coords.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let word = alg.basis_word(e.degree, i);
            let mut m = Matrix::identity(f, self.dim(d));
            let mut deg = d;
            for &j in &word {
                if self.dim(deg) == 0 {
                    m = Matrix::zeros(f, self.dim(deg + 1), m.cols());
                } else {
                    m = self.act(deg, j).mul(f, &m);
                }
                deg += 1;
            }
            out = out.add(f, &m.scale(f, c));
        }
        Ok(out)
    }

    /// Minimal generators: in each degree, a complement of the image of the
    /// previous degree under the three variable actions. Returns (degree,
    /// representative in the degree-d basis).
    pub fn minimal_generators(&self, f: &F) -> Vec<(i64, Vec<F::Elem>)> {
        let mut gens = Vec::new();
        for d in self.lo..=self.hi {
            let dim_d = self.dim(d);
            if dim_d == 0 {
                continue;
            }
            let span = if d == self.lo || self.dim(d - 1) == 0 {
                Matrix::zeros(f, 0, dim_d)
            } else {
                let mut rows: Vec<Vec<F::Elem>> = Vec::new();
                for j in 0..3 {
                    let a = self.act(d - 1, j);
                    for c in 0..a.cols() {
                        rows.push(a.col_vec(c));
                    }
                }
                Matrix::from_rows(f, dim_d, &rows)
            };
            let sub = Subspace::from_rows(f, &span);
            for c in sub.complement() {
                let mut v = vec![f.zero(); dim_d];
                v[c] = f.one();
                gens.push((d, v));
            }
        }
        gens
    }

    /// Restriction of the window to degrees >= lo2 (used after shifting).
    pub fn truncate_window(&self, lo2: i64, hi2: i64) -> DegreewiseModule<F> {
        assert!(lo2 >= self.lo && hi2 <= self.hi && lo2 <= hi2);
        let dims = (lo2..=hi2).map(|d| self.dim(d)).collect();
        let acts = (lo2..hi2)
            .map(|d| {
                let a = &self.acts[(d - self.lo) as usize];
                [a[0].clone(), a[1].clone(), a[2].clone()]
            })
            .collect();
        DegreewiseModule::new(lo2, hi2, dims, acts)
    }

    /// The shifted module M(s), with M(s)_d = M_{d+s}.
    pub fn shift(&self, s: i64) -> DegreewiseModule<F> {
        DegreewiseModule {
            lo: self.lo - s,
            hi: self.hi - s,
            dims: self.dims.clone(),
            acts: self.acts.clone(),
        }
    }
}

/// The twisted free as a module over its computable window.
pub fn free_module<F: Field>(
    alg: &GradedAlgebra<F>,
    free: &TwistedFree,
) -> Result<DegreewiseModule<F>> {
    let max_twist = free.twists.iter().copied().max().unwrap_or(0);
    let lo = -max_twist;
    let hi = alg.degree_bound() as i64 - max_twist;
    let dims = (lo..=hi).map(|d| free.piece_dim(d)).collect();
    let mut acts = Vec::new();
    for d in lo..hi {
        acts.push([
            free_var_action(alg, free, d, 0)?,
            free_var_action(alg, free, d, 1)?,
            free_var_action(alg, free, d, 2)?,
        ]);
    }
    Ok(DegreewiseModule::new(lo, hi, dims, acts))
}

/// Cokernel of a graded map, with canonical quotient coordinates per degree.
pub fn cokernel_module<F: Field>(
    alg: &GradedAlgebra<F>,
    map: &GradedMap<F>,
) -> Result<DegreewiseModule<F>> {
    let f = &alg.field;
    let max_twist = map.target.twists.iter().copied().max().unwrap_or(0);
    let lo = -max_twist;
    let hi = alg.degree_bound() as i64 - max_twist;
    let mut subs = Vec::new();
    let mut dims = Vec::new();
    for d in lo..=hi {
        let img = map.degree_matrix(alg, d)?;
        let sub = Subspace::from_cols(f, &img);
        dims.push(map.target.piece_dim(d) - sub.dim());
        subs.push(sub);
    }
    let mut acts = Vec::new();
    for d in lo..hi {
        let sub_d = &subs[(d - lo) as usize];
        let sub_d1 = &subs[(d + 1 - lo) as usize];
        let comp = sub_d.complement();
        let mut mats: Vec<Matrix<F>> = Vec::new();
        for j in 0..3 {
            let ract = free_var_action(alg, &map.target, d, j)?;
            let mut m = Matrix::zeros(f, sub_d1.ambient() - sub_d1.dim(), comp.len());
            for (col, &c) in comp.iter().enumerate() {
                let v = ract.col_vec(c);
                let q = sub_d1.quotient_coords(f, &v);
                for (row, x) in q.into_iter().enumerate() {
                    m[(row, col)] = x;
                }
            }
            mats.push(m);
        }
        acts.push([mats[0].clone(), mats[1].clone(), mats[2].clone()]);
    }
    Ok(DegreewiseModule::new(lo, hi, dims, acts))
}

/// A minimal graded free resolution, truncated at `max_length` syzygy steps.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    /// steps[0] = P_0, ...; empty trailing steps are dropped.
    pub steps: Vec<TwistedFree>,
    /// maps[q]: steps[q+1] -> steps[q].
    pub maps: Vec<GradedMap<F>>,
    /// Largest generator degree over all steps; the Hilbert function is
    /// exactly polynomial from here on.
    pub regularity: i64,
}

struct SubmoduleOfFree<F: Field> {
    ambient: TwistedFree,
    lo: i64,
    hi: i64,
    /// basis[d - lo]: ambient-coordinates basis matrix of the piece.
    basis: Vec<Matrix<F>>,
}

/// Minimal free resolution of a degreewise module.
///
/// Generators are taken as echelon complements of the image of the previous
/// degree, so no step carries unit entries. Fails with DegreeBoundTooSmall
/// when generators keep appearing at the top of the computable window or the
/// final kernel has not died inside it.
pub fn free_resolution<F: Field>(
    alg: &GradedAlgebra<F>,
    module: &DegreewiseModule<F>,
    max_length: usize,
) -> Result<Resolution<F>> {
    let f = &alg.field;
    let lo = module.lo();
    let hi = module.hi();
    let margin = 2;

    let mut steps: Vec<TwistedFree> = Vec::new();
    let mut maps: Vec<GradedMap<F>> = Vec::new();
    let mut regularity = i64::MIN;

    // Current module to present: dims+acts, plus (for q >= 1) its basis
    // inside the previous free step.
    let mut cur = module.clone();
    let mut cur_amb: Option<SubmoduleOfFree<F>> = None;

    for q in 0..=max_length + 1 {
        let gens = cur.minimal_generators(f);
        if let Some(dmax) = gens.iter().map(|(d, _)| *d).max() {
            if dmax > hi - margin {
                return Err(Error::DegreeBoundTooSmall(format!(
                    "step {q} has a generator in degree {dmax}, too close to the window top {hi}"
                )));
            }
            regularity = regularity.max(dmax);
        }
        if gens.is_empty() {
            // Resolution ended at the previous step; cur must vanish.
            for d in cur.lo()..=cur.hi() {
                if cur.dim(d) != 0 {
                    return Err(Error::DegreeBoundTooSmall(format!(
                        "resolution step {q} should vanish but has dimension {} in degree {d}",
                        cur.dim(d)
                    )));
                }
            }
            break;
        }
        if q == max_length + 1 {
            return Err(Error::DegreeBoundTooSmall(format!(
                "resolution does not terminate within {max_length} syzygy steps"
            )));
        }
        let step = TwistedFree::new(gens.iter().map(|(d, _)| -d).collect());
        // Entries of the map step -> previous step.
        if let Some(amb) = &cur_amb {
            let mut entries: Vec<Vec<Option<AlgebraElement<F>>>> =
                vec![vec![None; gens.len()]; amb.ambient.rank()];
            for (col, (dg, rep)) in gens.iter().enumerate() {
                let b = &amb.basis[(dg - amb.lo) as usize];
                let v = b.mul_vec(f, rep);
                let offs = amb.ambient.piece_offsets(*dg);
                for (i, m) in amb.ambient.twists.iter().enumerate() {
                    let piece = &v[offs[i]..offs[i + 1]];
                    let deg = m + dg;
                    if piece.is_empty() {
                        continue;
                    }
                    let e = AlgebraElement {
                        degree: deg as usize,
                        coords: piece.to_vec(),
                    };
                    if !e.is_zero(f) {
                        entries[i][col] = Some(e);
                    }
                }
            }
            maps.push(GradedMap::new(step.clone(), amb.ambient.clone(), entries)?);
        }
        steps.push(step.clone());

        // Kernel of the evaluation map step -> cur, degree by degree.
        let mut kdims = Vec::new();
        let mut kbasis = Vec::new();
        for d in lo..=hi {
            let eval = evaluation_matrix(alg, &cur, &gens, d)?;
            let ker = eval.kernel_basis(f);
            kdims.push(ker.len());
            kbasis.push(Matrix::from_cols(f, eval.cols(), &ker));
        }
        let mut kacts = Vec::new();
        for d in lo..hi {
            let b_d = &kbasis[(d - lo) as usize];
            let b_d1 = &kbasis[(d + 1 - lo) as usize];
            let mut mats = Vec::new();
            for j in 0..3 {
                let ract = free_var_action(alg, &step, d, j)?;
                let img = ract.mul(f, b_d);
                let m = if b_d1.cols() == 0 {
                    Matrix::zeros(f, 0, b_d.cols())
                } else {
                    b_d1.solve(f, &img).ok_or_else(|| {
                        Error::DegreeBoundTooSmall(
                            "kernel submodule is not closed under the action".into(),
                        )
                    })?
                };
                mats.push(m);
            }
            kacts.push([mats[0].clone(), mats[1].clone(), mats[2].clone()]);
        }
        cur = DegreewiseModule::new(lo, hi, kdims, kacts);
        cur_amb = Some(SubmoduleOfFree {
            ambient: step,
            lo,
            hi,
            basis: kbasis,
        });
        let _ = cur_amb.as_ref().map(|a| (a.lo, a.hi));
    }

    if regularity == i64::MIN {
        regularity = lo;
    }
    Ok(Resolution {
        steps,
        maps,
        regularity,
    })
}

/// Evaluation of a free cover at degree d: sum_g S_{d - deg g} -> M_d.
fn evaluation_matrix<F: Field>(
    alg: &GradedAlgebra<F>,
    module: &DegreewiseModule<F>,
    gens: &[(i64, Vec<F::Elem>)],
    d: i64,
) -> Result<Matrix<F>> {
    let f = &alg.field;
    let target_dim = module.dim(d);
    let mut cols: Vec<Vec<F::Elem>> = Vec::new();
    for (dg, rep) in gens {
        let e = d - dg;
        if e < 0 {
            continue;
        }
        alg.check_degree(e)?;
        for i in 0..alg.dim(e) {
            let word = alg.basis_word(e as usize, i);
            let mut v = rep.clone();
            let mut deg = *dg;
            for &j in &word {
                if module.dim(deg) == 0 {
                    v = vec![f.zero(); module.dim(deg + 1)];
                } else {
                    v = module.act(deg, j).mul_vec(f, &v);
                }
                deg += 1;
            }
            cols.push(v);
        }
    }
    Ok(Matrix::from_cols(f, target_dim, &cols))
}

/// (rank, c_1, chi) and the Hilbert polynomial, from a resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub rank: i64,
    pub c1: i64,
    pub chi: i64,
    /// Coefficients (a2, a1, a0) of p(t) = a2 t^2 + a1 t + a0.
    pub hilbert_poly: [String; 3],
}

impl Invariants {
    pub fn from_rc(rank: i64, c1: i64, chi: i64) -> Self {
        let a2 = Rational64::new(rank, 2);
        let a1 = Rational64::new(rank, 2) + Rational64::from_integer(c1 + rank);
        let a0 = Rational64::from_integer(chi);
        Invariants {
            rank,
            c1,
            chi,
            hilbert_poly: [a2.to_string(), a1.to_string(), a0.to_string()],
        }
    }

    /// p(d) as an exact integer (the Hilbert polynomial takes integer values).
    pub fn poly_at(&self, d: i64) -> i64 {
        // p(t) = r/2 t(t+1) + (c1 + r) t + chi.
        self.rank * d * (d + 1) / 2 + (self.c1 + self.rank) * d + self.chi
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.rank, self.c1, self.chi)
    }
}

/// Invariants by alternating sums over the resolution, checked against the
/// module's Hilbert function beyond the regularity degree.
pub fn invariants_of_resolution<F: Field>(
    resolution: &Resolution<F>,
    module: &DegreewiseModule<F>,
) -> Result<Invariants> {
    let mut rank = 0i64;
    let mut c1 = 0i64;
    let mut chi = 0i64;
    for (q, step) in resolution.steps.iter().enumerate() {
        let sign = if q % 2 == 0 { 1 } else { -1 };
        rank += sign * step.rank() as i64;
        for m in &step.twists {
            c1 += sign * m;
            chi += sign * chi_twist(*m);
        }
    }
    let inv = Invariants::from_rc(rank, c1, chi);
    for d in resolution.regularity..=module.hi() {
        let hf = module.dim(d) as i64;
        if hf != inv.poly_at(d) {
            return Err(Error::HilbertMismatch {
                degree: d.max(0) as usize,
                got: hf as usize,
                expected: inv.poly_at(d).max(0) as usize,
            });
        }
    }
    Ok(inv)
}

/// The invariants of M(s): rank is unchanged, c1 grows by s*r, chi follows
/// the shift recurrence chi(M(1)) = chi + 2r + c1.
pub fn shift_invariants(inv: &Invariants, s: i64) -> Invariants {
    let (r, mut c1, mut chi) = inv.triple();
    if s >= 0 {
        for _ in 0..s {
            chi += 2 * r + c1;
            c1 += r;
        }
    } else {
        for _ in 0..(-s) {
            chi -= r + c1;
            c1 -= r;
        }
    }
    Invariants::from_rc(r, c1, chi)
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    /// (twist, h0, h1, h2) per requested twist.
    pub rows: Vec<(i64, usize, usize, usize)>,
}

/// Cohomology dimensions of a finite complex ... -> C_q -> C_{q-1} -> ...
/// given the maps, at every spot.
fn complex_cohomology_dims<F: Field>(
    f: &F,
    dims: &[usize],
    maps: &[Matrix<F>],
) -> Vec<usize> {
    let w = dims.len();
    let ranks: Vec<usize> = maps.iter().map(|m| m.rank(f)).collect();
    (0..w)
        .map(|q| {
            let out_rank = if q == 0 { 0 } else { ranks[q - 1] };
            let in_rank = if q < maps.len() { ranks[q] } else { 0 };
            dims[q] - out_rank - in_rank
        })
        .collect()
}

/// (h0, h1, h2) of M(t) as hypercohomology of the resolution.
pub fn cohomology_at_twist<F: Field>(
    alg: &GradedAlgebra<F>,
    resolution: &Resolution<F>,
    inv: &Invariants,
    t: i64,
) -> Result<(usize, usize, usize)> {
    let f = &alg.field;
    let w = resolution.steps.len();
    if w == 0 {
        return Ok((0, 0, 0));
    }

    // Row 0: H^0 of each term with left-multiplication differentials.
    let row0_dims: Vec<usize> = resolution
        .steps
        .iter()
        .map(|s| s.piece_dim(t))
        .collect();
    let mut row0_maps = Vec::new();
    for q in 1..w {
        row0_maps.push(resolution.maps[q - 1].degree_matrix(alg, t)?);
    }
    let row0 = complex_cohomology_dims(f, &row0_dims, &row0_maps);

    // Row 2: H^2 terms are duals of S_{-3-m-t}; the functorial map is the
    // transpose of right multiplication by the entry.
    let row2_dims: Vec<usize> = resolution
        .steps
        .iter()
        .map(|s| s.twists.iter().map(|m| h2_twist(m + t)).sum())
        .collect();
    let mut row2_maps = Vec::new();
    for q in 1..w {
        row2_maps.push(h2_map(alg, &resolution.maps[q - 1], t)?);
    }
    let row2 = complex_cohomology_dims(f, &row2_dims, &row2_maps);

    let at = |v: &Vec<usize>, q: usize| v.get(q).copied().unwrap_or(0);
    // The d3 differential E(-3,2) -> E(0,0) is injective because the complex
    // is a resolution; no other differential moves these corners.
    let h0 = at(&row0, 0) + at(&row2, 2) - at(&row2, 3);
    let h1 = at(&row2, 1);
    let h2 = at(&row2, 0);

    // Euler consistency pins the sign conventions.
    let euler = h0 as i64 - h1 as i64 + h2 as i64;
    if euler != inv.poly_at(t) {
        return Err(Error::IdentityViolated(format!(
            "Euler characteristic at twist {t}: h0-h1+h2 = {euler} but p_M({t}) = {}",
            inv.poly_at(t)
        )));
    }
    Ok((h0, h1, h2))
}

fn h2_map<F: Field>(alg: &GradedAlgebra<F>, map: &GradedMap<F>, t: i64) -> Result<Matrix<F>> {
    let f = &alg.field;
    let src_dims: Vec<usize> = map.source.twists.iter().map(|m| h2_twist(m + t)).collect();
    let tgt_dims: Vec<usize> = map.target.twists.iter().map(|m| h2_twist(m + t)).collect();
    let src_offs = offsets(&src_dims);
    let tgt_offs = offsets(&tgt_dims);
    let mut out = Matrix::zeros(f, *tgt_offs.last().unwrap(), *src_offs.last().unwrap());
    for (i, row) in map.entries.iter().enumerate() {
        if tgt_dims[i] == 0 {
            continue;
        }
        for (j, entry) in row.iter().enumerate() {
            if src_dims[j] == 0 {
                continue;
            }
            let Some(e) = entry else { continue };
            // Right multiplication S_{-3-n_i-t} -> S_{-3-m_j-t}, transposed.
            let from = -3 - map.target.twists[i] - t;
            alg.check_degree(from + e.degree as i64)?;
            let block = alg.right_mul_matrix(e, from as usize)?.transpose();
            for bi in 0..block.rows() {
                for bj in 0..block.cols() {
                    out[(tgt_offs[i] + bi, src_offs[j] + bj)] = block[(bi, bj)].clone();
                }
            }
        }
    }
    Ok(out)
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut offs = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    for d in dims {
        offs.push(acc);
        acc += d;
    }
    offs.push(acc);
    offs
}

/// A module with cached resolution-derived data. Caches are filled behind
/// `&mut self`; once computed they are immutable.
#[derive(Clone, Debug)]
pub struct ModulePresentation<F: Field> {
    pub data: DegreewiseModule<F>,
    resolution: Option<Resolution<F>>,
    invariants: Option<Invariants>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub satisfied: bool,
    pub h0: [usize; 2],
    pub h2: [usize; 2],
    /// (h1 at twist -2, h1 at twist -1): the Beilinson dimensions.
    pub beilinson: (usize, usize),
}

impl<F: Field> ModulePresentation<F> {
    pub fn from_data(data: DegreewiseModule<F>) -> Self {
        ModulePresentation {
            data,
            resolution: None,
            invariants: None,
        }
    }

    pub fn from_free(alg: &GradedAlgebra<F>, twists: Vec<i64>) -> Result<Self> {
        Ok(Self::from_data(free_module(alg, &TwistedFree::new(twists))?))
    }

    pub fn from_cokernel(alg: &GradedAlgebra<F>, map: &GradedMap<F>) -> Result<Self> {
        Ok(Self::from_data(cokernel_module(alg, map)?))
    }

    pub fn hilbert(&self, d: i64) -> Result<usize> {
        self.data.hilbert(d)
    }

    pub fn resolution(&mut self, alg: &GradedAlgebra<F>) -> Result<&Resolution<F>> {
        if self.resolution.is_none() {
            self.resolution = Some(free_resolution(alg, &self.data, 3)?);
        }
        Ok(self.resolution.as_ref().unwrap())
    }

    pub fn invariants(&mut self, alg: &GradedAlgebra<F>) -> Result<Invariants> {
        if self.invariants.is_none() {
            let r = self.resolution(alg)?.clone();
            self.invariants = Some(invariants_of_resolution(&r, &self.data)?);
        }
        Ok(self.invariants.clone().unwrap())
    }

    pub fn cohomology_table(
        &mut self,
        alg: &GradedAlgebra<F>,
        twists: impl IntoIterator<Item = i64>,
    ) -> Result<CohomologyTable> {
        let inv = self.invariants(alg)?;
        let resolution = self.resolution(alg)?.clone();
        let mut rows = Vec::new();
        for t in twists {
            let (h0, h1, h2) = cohomology_at_twist(alg, &resolution, &inv, t)?;
            rows.push((t, h0, h1, h2));
        }
        Ok(CohomologyTable { rows })
    }

    /// h0 = h2 = 0 at twists -1 and -2; reports the Beilinson dimensions
    /// h1(M(-2)), h1(M(-1)) alongside.
    pub fn verify_vanishing_condition(
        &mut self,
        alg: &GradedAlgebra<F>,
    ) -> Result<VanishingReport> {
        let table = self.cohomology_table(alg, [-2, -1])?;
        let (_, h0_m2, h1_m2, h2_m2) = table.rows[0];
        let (_, h0_m1, h1_m1, h2_m1) = table.rows[1];
        Ok(VanishingReport {
            satisfied: h0_m2 == 0 && h2_m2 == 0 && h0_m1 == 0 && h2_m1 == 0,
            h0: [h0_m2, h0_m1],
            h2: [h2_m2, h2_m1],
            beilinson: (h1_m2, h1_m1),
        })
    }

    /// The shifted module M(s).
    pub fn shift(&self, s: i64) -> ModulePresentation<F> {
        ModulePresentation::from_data(self.data.shift(s))
    }

    /// The submodule Mg, isomorphic to a twist of M when g acts without
    /// kernel; rank is preserved and c_1 drops by 3.
    pub fn g_twist(&self, alg: &GradedAlgebra<F>) -> Result<ModulePresentation<F>> {
        let f = &alg.field;
        let g = alg.g();
        let lo = self.data.lo() + 3;
        let hi = self.data.hi();
        if hi < lo {
            return Err(Error::DegreeOverflow {
                requested: lo,
                bound: hi.max(0) as usize,
            });
        }
        let mut basis = Vec::new();
        let mut dims = Vec::new();
        for d in lo..=hi {
            let act_g = self.data.act_by_element(alg, g, d - 3)?;
            let source_dim = act_g.cols();
            let rank = act_g.rank(f);
            if rank != source_dim {
                return Err(Error::GNotInjective(format!(
                    "kernel of g on degree {} has dimension {}",
                    d - 3,
                    source_dim - rank
                )));
            }
            dims.push(rank);
            basis.push(act_g);
        }
        let mut acts = Vec::new();
        for d in lo..hi {
            let b_d = &basis[(d - lo) as usize];
            let b_d1 = &basis[(d + 1 - lo) as usize];
            let mut mats = Vec::new();
            for j in 0..3 {
                let img = if self.data.dim(d) == 0 {
                    Matrix::zeros(f, self.data.dim(d + 1), b_d.cols())
                } else {
                    self.data.act(d, j).mul(f, b_d)
                };
                let m = if b_d1.cols() == 0 {
                    Matrix::zeros(f, 0, b_d.cols())
                } else {
                    b_d1.solve(f, &img).ok_or_else(|| {
                        Error::GNotInjective("Mg is not closed under the action".into())
                    })?
                };
                mats.push(m);
            }
            acts.push([mats[0].clone(), mats[1].clone(), mats[2].clone()]);
        }
        Ok(ModulePresentation::from_data(DegreewiseModule::new(
            lo, hi, dims, acts,
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, AlgebraSpec, Family};
    use crate::field::{FieldSpec, PrimeField};

    fn skl(d: usize) -> GradedAlgebra<PrimeField> {
        let spec = AlgebraSpec::new(FieldSpec::prime(101), Family::Sklyanin, vec![1, 2, 3])
            .with_degree_bound(d);
        build_algebra(PrimeField::new(101).unwrap(), &spec).unwrap()
    }

    fn structure_map<F: Field>(alg: &GradedAlgebra<F>) -> GradedMap<F> {
        // O(-1)^3 -> O by (x, y, z).
        let entries = vec![vec![
            Some(alg.var(0)),
            Some(alg.var(1)),
            Some(alg.var(2)),
        ]];
        GradedMap::new(
            TwistedFree::new(vec![-1, -1, -1]),
            TwistedFree::new(vec![0]),
            entries,
        )
        .unwrap()
    }

    #[test]
    fn structure_module_is_k() {
        let alg = skl(8);
        let m = ModulePresentation::from_cokernel(&alg, &structure_map(&alg)).unwrap();
        assert_eq!(m.hilbert(0).unwrap(), 1);
        assert_eq!(m.hilbert(1).unwrap(), 0);
        assert_eq!(m.hilbert(4).unwrap(), 0);
    }

    #[test]
    fn free_module_hilbert() {
        let alg = skl(8);
        let o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        assert_eq!(o.hilbert(2).unwrap(), 6);
        let o1 = ModulePresentation::from_free(&alg, vec![1]).unwrap();
        assert_eq!(o1.hilbert(-1).unwrap(), 1);
        assert_eq!(o1.hilbert(2).unwrap(), 10);
    }

    #[test]
    fn resolution_of_k_has_koszul_twists() {
        let alg = skl(9);
        let mut m = ModulePresentation::from_cokernel(&alg, &structure_map(&alg)).unwrap();
        let res = m.resolution(&alg).unwrap();
        let twists: Vec<Vec<i64>> = res.steps.iter().map(|s| s.twists.clone()).collect();
        assert_eq!(
            twists,
            vec![vec![0], vec![-1, -1, -1], vec![-2, -2, -2], vec![-3]]
        );
        let inv = m.invariants(&alg).unwrap();
        assert_eq!(inv.triple(), (0, 0, 0));
    }

    #[test]
    fn invariants_of_twisted_frees() {
        let alg = skl(8);
        for m in [-2i64, 0, 1, 2] {
            let mut modl = ModulePresentation::from_free(&alg, vec![m]).unwrap();
            let inv = modl.invariants(&alg).unwrap();
            assert_eq!(inv.triple(), (1, m, chi_twist(m)));
        }
        // O(1): (1, 1, 3).
        let mut o1 = ModulePresentation::from_free(&alg, vec![1]).unwrap();
        assert_eq!(o1.invariants(&alg).unwrap().triple(), (1, 1, 3));
    }

    #[test]
    fn shift_recurrence_matches_resolution() {
        let alg = skl(8);
        let mut o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        let inv = o.invariants(&alg).unwrap();
        let shifted = shift_invariants(&inv, 1);
        assert_eq!(shifted.triple(), (1, 1, 3));
        let mut o1 = o.shift(1);
        assert_eq!(o1.invariants(&alg).unwrap().triple(), (1, 1, 3));
        let back = shift_invariants(&shifted, -1);
        assert_eq!(back.triple(), inv.triple());
    }

    #[test]
    fn cohomology_of_o_twists() {
        let alg = skl(10);
        let mut o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        let t = o.cohomology_table(&alg, [-3, -1, 0, 2]).unwrap();
        assert_eq!(t.rows[0], (-3, 0, 0, 1));
        assert_eq!(t.rows[1], (-1, 0, 0, 0));
        assert_eq!(t.rows[2], (0, 1, 0, 0));
        assert_eq!(t.rows[3], (2, 6, 0, 0));
    }

    #[test]
    fn cohomology_of_k_vanishes() {
        let alg = skl(9);
        let mut m = ModulePresentation::from_cokernel(&alg, &structure_map(&alg)).unwrap();
        let t = m.cohomology_table(&alg, [-2, -1, 0, 1]).unwrap();
        for (_, h0, h1, h2) in t.rows {
            assert_eq!((h0, h1, h2), (0, 0, 0));
        }
    }

    #[test]
    fn vanishing_condition_for_o_and_o1() {
        let alg = skl(10);
        let mut o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        let rep = o.verify_vanishing_condition(&alg).unwrap();
        assert!(rep.satisfied);
        assert_eq!(rep.beilinson, (0, 0));
        let mut o1 = ModulePresentation::from_free(&alg, vec![1]).unwrap();
        let rep = o1.verify_vanishing_condition(&alg).unwrap();
        assert!(!rep.satisfied);
    }

    #[test]
    fn g_twist_of_o_drops_c1_by_3() {
        let alg = skl(10);
        let o = ModulePresentation::from_free(&alg, vec![0]).unwrap();
        let mut og = o.g_twist(&alg).unwrap();
        let inv = og.invariants(&alg).unwrap();
        assert_eq!(inv.triple(), (1, -3, 1));
    }

    #[test]
    fn serre_duality_closed_forms() {
        for m in -8i64..=8 {
            assert_eq!(h2_twist(m), h0_twist(-3 - m));
        }
        assert_eq!(h0_twist(0), 1);
        assert_eq!(h2_twist(-3), 1);
        assert_eq!(h0_twist(-1), 0);
    }

    #[test]
    fn direct_sum_additivity() {
        let alg = skl(8);
        let mut a = ModulePresentation::from_free(&alg, vec![-1]).unwrap();
        let mut c = ModulePresentation::from_free(&alg, vec![2]).unwrap();
        let mut b = ModulePresentation::from_free(&alg, vec![-1, 2]).unwrap();
        let ia = a.invariants(&alg).unwrap();
        let ic = c.invariants(&alg).unwrap();
        let ib = b.invariants(&alg).unwrap();
        assert_eq!(ib.rank, ia.rank + ic.rank);
        assert_eq!(ib.c1, ia.c1 + ic.c1);
        assert_eq!(ib.chi, ia.chi + ic.chi);
    }
}
