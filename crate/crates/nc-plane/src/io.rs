//! JSON file formats: algebra specs, Kronecker complexes, ADHM data and
//! module presentations. Scalars are JSON numbers over prime fields and
//! exact fraction strings over the rationals; round-trips are bit-exact.

use crate::algebra::{AlgebraElement, AlgebraSpec, GradedAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::grmod::{GradedMap, TwistedFree};
use crate::kronecker::KroneckerComplex;
use crate::matrix::Matrix;
use num::BigRational;
use serde_json::{json, Value};
use std::str::FromStr;

/// Field-aware scalar (de)serialization.
pub trait JsonField: Field {
    fn elem_to_json(&self, e: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

impl JsonField for PrimeField {
    fn elem_to_json(&self, e: &u64) -> Value {
        json!(e)
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        match v {
            Value::Number(n) => {
                if let Some(u) = n.as_u64() {
                    Ok(u % self.p())
                } else if let Some(i) = n.as_i64() {
                    Ok(self.from_i64(i))
                } else {
                    Err(Error::Usage(format!("scalar {n} is not an integer")))
                }
            }
            _ => Err(Error::Usage(format!("expected integer scalar, got {v}"))),
        }
    }
}

impl JsonField for Rationals {
    fn elem_to_json(&self, e: &BigRational) -> Value {
        json!(self.fmt_elem(e))
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_i64(i))
                .ok_or_else(|| Error::Usage(format!("scalar {n} is not an integer"))),
            Value::String(s) => {
                BigRational::from_str(s).map_err(|e| Error::Usage(format!("bad rational {s:?}: {e}")))
            }
            _ => Err(Error::Usage(format!("expected rational scalar, got {v}"))),
        }
    }
}

pub fn matrix_to_json<F: JsonField>(f: &F, m: &Matrix<F>) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|e| f.elem_to_json(e)).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json<F: JsonField>(
    f: &F,
    v: &Value,
    rows: usize,
    cols: usize,
) -> Result<Matrix<F>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Usage("matrix must be an array of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::Usage(format!(
            "matrix has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in arr {
        let row = r
            .as_array()
            .ok_or_else(|| Error::Usage("matrix row must be an array".into()))?;
        if row.len() != cols {
            return Err(Error::Usage(format!(
                "matrix row has {} entries, expected {cols}",
                row.len()
            )));
        }
        for e in row {
            data.push(f.elem_from_json(e)?);
        }
    }
    Ok(Matrix::new(rows, cols, data))
}

/// Complex file: `{"algebra": spec, "a": n x a x 3, "b": c x n x 3}`, each
/// entry the [x, y, z] coefficient triple of a degree-1 element.
pub fn complex_to_json<F: JsonField>(
    f: &F,
    spec: &AlgebraSpec,
    k: &KroneckerComplex<F>,
) -> Value {
    let (a_dim, n, c_dim) = k.dims;
    let triples = |mats: &[Matrix<F>; 3], rows: usize, cols: usize| -> Value {
        let out: Vec<Value> = (0..rows)
            .map(|i| {
                Value::Array(
                    (0..cols)
                        .map(|j| {
                            Value::Array(
                                (0..3).map(|u| f.elem_to_json(&mats[u][(i, j)])).collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        Value::Array(out)
    };
    json!({
        "algebra": spec,
        "dims": [a_dim, n, c_dim],
        "a": triples(&k.a, n, a_dim),
        "b": triples(&k.b, c_dim, n),
    })
}

pub fn complex_from_json<F: JsonField>(
    alg: &GradedAlgebra<F>,
    v: &Value,
) -> Result<KroneckerComplex<F>> {
    let f = &alg.field;
    let dims = v
        .get("dims")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::Usage("complex file needs a dims triple".into()))?;
    if dims.len() != 3 {
        return Err(Error::Usage("dims must be [a, n, c]".into()));
    }
    let a_dim = dims[0].as_u64().unwrap_or(0) as usize;
    let n = dims[1].as_u64().unwrap_or(0) as usize;
    let c_dim = dims[2].as_u64().unwrap_or(0) as usize;
    let read = |key: &str, rows: usize, cols: usize| -> Result<[Matrix<F>; 3]> {
        let arr = v
            .get(key)
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Usage(format!("complex file needs {key:?}")))?;
        if arr.len() != rows {
            return Err(Error::Usage(format!("{key} has wrong row count")));
        }
        let mut mats: [Matrix<F>; 3] = std::array::from_fn(|_| Matrix::zeros(f, rows, cols));
        for (i, r) in arr.iter().enumerate() {
            let row = r
                .as_array()
                .ok_or_else(|| Error::Usage("rows must be arrays".into()))?;
            if row.len() != cols {
                return Err(Error::Usage(format!("{key} has wrong column count")));
            }
            for (j, entry) in row.iter().enumerate() {
                let triple = entry
                    .as_array()
                    .ok_or_else(|| Error::Usage("entries must be [x,y,z] triples".into()))?;
                if triple.len() != 3 {
                    return Err(Error::Usage("entries must have three coefficients".into()));
                }
                for (u, coeff) in triple.iter().enumerate() {
                    mats[u][(i, j)] = f.elem_from_json(coeff)?;
                }
            }
        }
        Ok(mats)
    };
    let a = read("a", n, a_dim)?;
    let b = read("b", c_dim, n)?;
    crate::kronecker::build_complex(alg, a, b)
}

/// Module presentation file:
/// `{"algebra": spec, "p0": twists, "p1": twists, "entries": rows}` where
/// entry (i, j) is either null or the coordinate vector of a homogeneous
/// element of degree p0[i] - p1[j] in the canonical basis.
pub fn graded_map_from_json<F: JsonField>(
    alg: &GradedAlgebra<F>,
    v: &Value,
) -> Result<GradedMap<F>> {
    let f = &alg.field;
    let twists = |key: &str| -> Result<Vec<i64>> {
        v.get(key)
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Usage(format!("module file needs {key:?} twists")))?
            .iter()
            .map(|t| {
                t.as_i64()
                    .ok_or_else(|| Error::Usage("twists must be integers".into()))
            })
            .collect()
    };
    let p0 = twists("p0")?;
    let p1 = twists("p1")?;
    let rows = v
        .get("entries")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Usage("module file needs entries".into()))?;
    if rows.len() != p0.len() {
        return Err(Error::Usage("entries row count must match p0".into()));
    }
    let mut entries = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let row = r
            .as_array()
            .ok_or_else(|| Error::Usage("entry rows must be arrays".into()))?;
        if row.len() != p1.len() {
            return Err(Error::Usage("entries column count must match p1".into()));
        }
        let mut out_row = Vec::new();
        for (j, entry) in row.iter().enumerate() {
            if entry.is_null() {
                out_row.push(None);
                continue;
            }
            let coords_json = entry
                .as_array()
                .ok_or_else(|| Error::Usage("entry must be null or a coordinate array".into()))?;
            let degree = p0[i] - p1[j];
            if degree < 0 {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({i},{j}) would need negative degree {degree}"
                )));
            }
            let want = alg.dim(degree);
            if coords_json.len() != want {
                return Err(Error::Usage(format!(
                    "entry ({i},{j}) has {} coordinates, expected {want}",
                    coords_json.len()
                )));
            }
            let coords: Result<Vec<F::Elem>> =
                coords_json.iter().map(|c| f.elem_from_json(c)).collect();
            let e = AlgebraElement {
                degree: degree as usize,
                coords: coords?,
            };
            out_row.push(if e.is_zero(f) { None } else { Some(e) });
        }
        entries.push(out_row);
    }
    GradedMap::new(TwistedFree::new(p1), TwistedFree::new(p0), entries)
}

/// ADHM datum file: `{"n": .., "r": .., "b1": .., "b2": .., "i": .., "j": ..}`
/// with row-major matrices.
pub fn adhm_from_json<F: JsonField>(f: &F, v: &Value) -> Result<crate::adhm::AdhmDatum<F>> {
    let n = v
        .get("n")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Usage("datum needs n".into()))? as usize;
    let r = v
        .get("r")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Usage("datum needs r".into()))? as usize;
    let get = |key: &str, rows: usize, cols: usize| -> Result<Matrix<F>> {
        matrix_from_json(
            f,
            v.get(key)
                .ok_or_else(|| Error::Usage(format!("datum needs {key:?}")))?,
            rows,
            cols,
        )
    };
    crate::adhm::AdhmDatum::new(
        n,
        r,
        get("b1", n, n)?,
        get("b2", n, n)?,
        get("i", n, r)?,
        get("j", r, n)?,
    )
}

pub fn adhm_to_json<F: JsonField>(f: &F, d: &crate::adhm::AdhmDatum<F>) -> Value {
    json!({
        "n": d.n,
        "r": d.r,
        "b1": matrix_to_json(f, &d.b1),
        "b2": matrix_to_json(f, &d.b2),
        "i": matrix_to_json(f, &d.i),
        "j": matrix_to_json(f, &d.j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};
    use crate::field::FieldSpec;

    #[test]
    fn complex_file_round_trip() {
        let spec = AlgebraSpec::new(FieldSpec::prime(101), Family::Polynomial, vec![])
            .with_cubic_g(&[("xyz", 1)])
            .with_degree_bound(6);
        let f = PrimeField::new(101).unwrap();
        let alg = build_algebra(f.clone(), &spec).unwrap();
        let a: [Matrix<PrimeField>; 3] = [
            Matrix::from_i64(&f, 3, 1, &[0, 1, 0]),
            Matrix::from_i64(&f, 3, 1, &[-1, 0, 0]),
            Matrix::from_i64(&f, 3, 1, &[0, 0, 0]),
        ];
        let b: [Matrix<PrimeField>; 3] = [
            Matrix::from_i64(&f, 1, 3, &[1, 0, 0]),
            Matrix::from_i64(&f, 1, 3, &[0, 1, 0]),
            Matrix::from_i64(&f, 1, 3, &[0, 0, 1]),
        ];
        let k = crate::kronecker::build_complex(&alg, a, b).unwrap();
        let j = complex_to_json(&f, &spec, &k);
        let back = complex_from_json(&alg, &j).unwrap();
        assert_eq!(back.dims, k.dims);
        let j2 = complex_to_json(&f, &spec, &back);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            serde_json::to_string(&j2).unwrap()
        );
    }

    #[test]
    fn rational_scalars_round_trip() {
        let f = Rationals;
        let half = f.div(&f.from_i64(1), &f.from_i64(2));
        let j = f.elem_to_json(&half);
        assert_eq!(j, serde_json::json!("1/2"));
        assert_eq!(f.elem_from_json(&j).unwrap(), half);
    }
}
