//! JSON encoding of matrices, sequences, parameters and balls.
//!
//! Complex numbers are `[re, im]`, matrices are row-major nested arrays.
//! Floats use the shortest representation that parses back to the same bits.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matkernel::{CMatrix, SignatureMatrix, Tolerances};
use crate::polynomials::MatrixPoly;
use crate::sequence::PotapovSeq;
use crate::solve::{Orientation, RationalMatrixFn, SchurParam};
use crate::weyl::WeylBall;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn complex_to_json(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = a[0]
                .as_f64()
                .ok_or_else(|| parse_err("complex parts must be numbers"))?;
            let im = a[1]
                .as_f64()
                .ok_or_else(|| parse_err("complex parts must be numbers"))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(parse_err("complex number must be [re, im]")),
    }
}

pub fn matrix_to_json(a: &CMatrix) -> Value {
    Value::Array(
        (0..a.nrows())
            .map(|i| Value::Array((0..a.ncols()).map(|j| complex_to_json(a[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<CMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    if rows.is_empty() {
        return Err(parse_err("matrix has no rows"));
    }
    let mut data = Vec::new();
    let mut ncols = None;
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err("matrix row must be an array"))?;
        if *ncols.get_or_insert(row.len()) != row.len() {
            return Err(parse_err("matrix rows differ in length"));
        }
        for z in row {
            data.push(complex_from_json(z)?);
        }
    }
    let ncols = ncols.unwrap_or(0);
    if ncols == 0 {
        return Err(parse_err("matrix has no columns"));
    }
    Ok(CMatrix::from_row_slice(rows.len(), ncols, &data))
}

fn matrices_from_json(v: &Value, what: &str) -> Result<Vec<CMatrix>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array of matrices")))?
        .iter()
        .map(matrix_from_json)
        .collect()
}

pub fn signature_to_json(j: &SignatureMatrix) -> Value {
    let m = j.matrix();
    let n = m.nrows();
    let diagonal = (0..n).all(|r| (0..n).all(|s| r == s || m[(r, s)] == Complex64::new(0.0, 0.0)))
        && (0..n).all(|r| m[(r, r)].im == 0.0);
    if diagonal {
        json!({ "diag": (0..n).map(|r| num(m[(r, r)].re)).collect::<Vec<_>>() })
    } else {
        json!({ "matrix": matrix_to_json(m) })
    }
}

/// Parses a signature matrix. Structural problems are parse errors, while a
/// well-formed matrix that is not a Hermitian involution is rejected by the
/// library.
pub fn signature_from_json(v: &Value) -> Result<SignatureMatrix> {
    if let Some(d) = v.get("diag") {
        let signs: Vec<f64> = d
            .as_array()
            .ok_or_else(|| parse_err("J.diag must be an array"))?
            .iter()
            .map(|x| {
                x.as_f64()
                    .ok_or_else(|| parse_err("J.diag entries must be numbers"))
            })
            .collect::<Result<_>>()?;
        SignatureMatrix::from_diag(&signs)
    } else if let Some(m) = v.get("matrix") {
        SignatureMatrix::new(matrix_from_json(m)?)
    } else {
        Err(parse_err("J must have a diag or matrix field"))
    }
}

pub fn seq_to_json(seq: &PotapovSeq) -> Value {
    json!({
        "m": seq.m(),
        "J": signature_to_json(seq.signature()),
        "A": seq.coeffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn seq_from_json(v: &Value, tol: Tolerances) -> Result<PotapovSeq> {
    let m = v
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("missing integer field m"))? as usize;
    let j = signature_from_json(v.get("J").ok_or_else(|| parse_err("missing field J"))?)?;
    let a = matrices_from_json(v.get("A").ok_or_else(|| parse_err("missing field A"))?, "A")?;
    if j.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "J has size {}, m = {m}",
            j.dim()
        )));
    }
    PotapovSeq::new(j, a, tol)
}

pub fn poly_to_json(p: &MatrixPoly) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "coeffs".into(),
        Value::Array(p.coeffs().iter().map(matrix_to_json).collect()),
    );
    if let Some(d) = p.formal_degree() {
        obj.insert("formal_degree".into(), json!(d));
    }
    Value::Object(obj)
}

pub fn poly_from_json(v: &Value) -> Result<MatrixPoly> {
    let coeffs = matrices_from_json(
        v.get("coeffs")
            .ok_or_else(|| parse_err("polynomial needs coeffs"))?,
        "coeffs",
    )?;
    let p = MatrixPoly::new(coeffs)?;
    match v.get("formal_degree") {
        None | Some(Value::Null) => Ok(p),
        Some(d) => {
            let d = d
                .as_u64()
                .ok_or_else(|| parse_err("formal_degree must be an integer"))?;
            Ok(p.with_formal_degree(d as usize))
        }
    }
}

pub fn param_to_json(s: &SchurParam) -> Value {
    match s {
        SchurParam::Constant(a) => json!({ "constant": matrix_to_json(a) }),
        SchurParam::Poly(p) => json!({ "poly": poly_to_json(p) }),
    }
}

pub fn param_from_json(v: &Value) -> Result<SchurParam> {
    if let Some(a) = v.get("constant") {
        Ok(SchurParam::Constant(matrix_from_json(a)?))
    } else if let Some(p) = v.get("poly") {
        Ok(SchurParam::Poly(poly_from_json(p)?))
    } else {
        Err(parse_err("parameter must have a constant or poly field"))
    }
}

pub fn rational_to_json(f: &RationalMatrixFn) -> Value {
    json!({
        "num": poly_to_json(&f.num),
        "den": poly_to_json(&f.den),
        "orientation": f.orientation.name(),
    })
}

pub fn rational_from_json(v: &Value) -> Result<RationalMatrixFn> {
    let num = poly_from_json(v.get("num").ok_or_else(|| parse_err("missing num"))?)?;
    let den = poly_from_json(v.get("den").ok_or_else(|| parse_err("missing den"))?)?;
    let orientation = match v.get("orientation").and_then(Value::as_str) {
        Some("left") => Orientation::Left,
        Some("right") => Orientation::Right,
        _ => return Err(parse_err("orientation must be left or right")),
    };
    Ok(RationalMatrixFn::new(num, den, orientation))
}

pub fn ball_to_json(b: &WeylBall) -> Value {
    json!({
        "w": complex_to_json(b.w),
        "order": b.order,
        "center": matrix_to_json(&b.center),
        "lnorm": matrix_to_json(&b.lnorm),
        "rhalf": matrix_to_json(&b.rhalf),
        "L": matrix_to_json(&b.l),
        "R": matrix_to_json(&b.r),
    })
}

/// Parses `RE,IM` or a bare real number.
pub fn parse_point(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let f = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| parse_err(format!("bad point `{s}`")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(f(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
        _ => Err(parse_err(format!("bad point `{s}`"))),
    }
}

/// Evaluation points from `{"points": [...]}` or `{"disk_mesh": {"radius", "count"}}`.
///
/// A disk mesh places `count` points on the circle of the given radius.
pub fn grid_from_json(v: &Value) -> Result<Vec<Complex64>> {
    let pts = if let Some(p) = v.get("points") {
        p.as_array()
            .ok_or_else(|| parse_err("grid.points must be an array"))?
            .iter()
            .map(complex_from_json)
            .collect::<Result<Vec<_>>>()?
    } else if let Some(d) = v.get("disk_mesh") {
        let r = d
            .get("radius")
            .and_then(Value::as_f64)
            .ok_or_else(|| parse_err("disk_mesh.radius must be a number"))?;
        let n = d
            .get("count")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("disk_mesh.count must be an integer"))?;
        (0..n)
            .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    } else {
        return Err(parse_err("grid needs points or disk_mesh"));
    };
    if pts.iter().any(|z| z.norm().is_nan() || z.norm() >= 1.0) {
        return Err(Error::InvalidParam(
            "grid points must lie in the open unit disk".into(),
        ));
    }
    Ok(pts)
}
