//! The two-dimensional evaluation representation and the 4×4 R-matrix
//! `R_{η,ξ}(x)` in the basis |1,1⟩, |1,-1⟩, |-1,1⟩, |-1,-1⟩.

use thiserror::Error;

use crate::cybe::{ClassicalRMatrix, Sl2};
use crate::linalg::Matrix;
use crate::report::{Check, CheckVerdict};
use crate::scalar::{ParseScalarError, Scalar, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FundError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("grid must have 4 rows of 4 entries")]
    Shape,
    #[error("bad entry: {0}")]
    Entry(#[from] ParseScalarError),
}

/// `ρ(x)` for a finite generator `e`, `f`, `h` or `1`.
pub fn rho(x: &str) -> Result<Matrix, FundError> {
    Ok(match x {
        "e" => Matrix::unit(2, 0, 1),
        "f" => Matrix::unit(2, 1, 0),
        "h" => Matrix::from_ints(&[&[1, 0], &[0, -1]]),
        "1" => Matrix::identity(2),
        _ => return Err(FundError::UnknownSymbol(x.into())),
    })
}

pub fn rho_basis(x: Sl2) -> Matrix {
    rho(x.name()).expect("basis element")
}

/// Image of a current `h±`, `e±`, `f±` at `w` in the representation at
/// `u`: `η/(w-u) ρ(x)`; finite generators map to `ρ(x)`.
pub fn eval_field(symbol: &str, w: &Scalar, u: &Scalar) -> Result<Matrix, FundError> {
    let base = symbol.trim_end_matches(['+', '-']);
    if base.len() == symbol.len() {
        return rho(symbol);
    }
    if base == "1" || symbol.len() - base.len() != 1 {
        return Err(FundError::UnknownSymbol(symbol.into()));
    }
    let m = rho(base).map_err(|_| FundError::UnknownSymbol(symbol.into()))?;
    let pole = (w - u).inv().map_err(|_| FundError::UnknownSymbol(symbol.into()))?;
    Ok(m.scale(&(Scalar::eta() * pole)))
}

/// The flip of C²⊗C².
pub fn permutation() -> Matrix {
    let mut p = Matrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            p[(2 * i + j, 2 * j + i)] = Scalar::one();
        }
    }
    p
}

fn x() -> Scalar {
    Scalar::var(Var::U)
}

/// A 4×4 matrix of rational functions in the difference variable, held as
/// `Var::U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix4 {
    pub m: Matrix,
}

impl RMatrix4 {
    /// `R(arg)`.
    pub fn at(&self, arg: &Scalar) -> Matrix {
        self.m.substitute(&[(Var::U, arg.clone())]).expect("argument off the pole")
    }

    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> RMatrix4 {
        RMatrix4 { m: self.m.substitute(bindings).expect("no pole") }
    }

    /// `R²¹ = p R p`.
    pub fn flipped(&self) -> RMatrix4 {
        let p = permutation();
        RMatrix4 { m: p.mul(&self.m).mul(&p) }
    }

    /// Plain-text grid, one row per line, entries separated by ` ; `.
    pub fn to_grid(&self) -> String {
        let mut s = String::new();
        for i in 0..4 {
            let row: Vec<String> = (0..4).map(|j| self.m[(i, j)].to_string()).collect();
            s.push_str(&row.join(" ; "));
            s.push('\n');
        }
        s
    }

    pub fn from_grid(text: &str) -> Result<RMatrix4, FundError> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != 4 {
            return Err(FundError::Shape);
        }
        let mut m = Matrix::zeros(4, 4);
        for (i, r) in rows.iter().enumerate() {
            let cells: Vec<&str> = r.split(';').collect();
            if cells.len() != 4 {
                return Err(FundError::Shape);
            }
            for (j, c) in cells.iter().enumerate() {
                m[(i, j)] = c.trim().parse()?;
            }
        }
        Ok(RMatrix4 { m })
    }
}

/// `(1 + ξ ρ(f)⊗ρ(h)) (1 - η p/x) (1 - ξ ρ(h)⊗ρ(f))`.
pub fn build_r_fund() -> RMatrix4 {
    let (f, h) = (rho_basis(Sl2::F), rho_basis(Sl2::H));
    let one = Matrix::identity(4);
    let left = one.add(&f.kron(&h).scale(&Scalar::xi()));
    let mid = one.sub(&permutation().scale(&(Scalar::eta() / x())));
    let right = one.sub(&h.kron(&f).scale(&Scalar::xi()));
    RMatrix4 { m: left.mul(&mid).mul(&right) }
}

/// The displayed matrix, entered entry by entry.
pub fn r_printed() -> RMatrix4 {
    let d = Scalar::one() - Scalar::eta() / x();
    let a = -(Scalar::eta() / x());
    let xi = Scalar::xi();
    let z = Scalar::zero();
    let o = Scalar::one();
    let rows = [
        [d.clone(), z.clone(), z.clone(), z.clone()],
        [-xi.clone(), o.clone(), a.clone(), z.clone()],
        [xi.clone(), a, o, z],
        [&xi * &xi, -xi.clone(), xi, d],
    ];
    RMatrix4 { m: Matrix::from_fn(4, 4, |i, j| rows[i][j].clone()) }
}

/// `1 - η p/x`.
pub fn yang_r() -> RMatrix4 {
    RMatrix4 { m: Matrix::identity(4).sub(&permutation().scale(&(Scalar::eta() / x()))) }
}

/// R with entry (4,1) replaced by `2ξ²`.
pub fn r_control() -> RMatrix4 {
    let mut r = r_printed();
    r.m[(3, 0)] = Scalar::from_int(2) * Scalar::xi() * Scalar::xi();
    r
}

fn embed12(m: &Matrix) -> Matrix {
    m.kron(&Matrix::identity(2))
}

fn embed23(m: &Matrix) -> Matrix {
    Matrix::identity(2).kron(m)
}

fn p23() -> Matrix {
    embed23(&permutation())
}

/// `R¹²(u-v) R¹³(u-w) R²³(v-w) - R²³ R¹³ R¹²` as an 8×8 matrix.
pub fn qybe_defect(r: &RMatrix4) -> Matrix {
    let (u, v, w) = (Scalar::var(Var::U), Scalar::var(Var::V), Scalar::var(Var::W));
    let r12 = embed12(&r.at(&(&u - &v)));
    let p = p23();
    let r13 = p.mul(&embed12(&r.at(&(&u - &w)))).mul(&p);
    let r23 = embed23(&r.at(&(&v - &w)));
    r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12))
}

pub fn check_qybe(name: &str, r: &RMatrix4) -> Check {
    let d = qybe_defect(r);
    let bad = d.entries().filter(|(_, _, s)| !s.is_zero()).count();
    let c = Check::new(format!("fundrep/qybe/{name}"), "RTT6", CheckVerdict::from_bool(bad == 0));
    if bad == 0 {
        c
    } else {
        let (i, j, s) = d.entries().find(|(_, _, s)| !s.is_zero()).unwrap();
        c.details(format!("{bad} nonzero entries of 64, e.g. ({}, {}) = {s}", i + 1, j + 1))
    }
}

/// Rank, eigenvalue and image of `R(η)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorReport {
    pub rank: usize,
    pub lambda: Option<Scalar>,
    /// Image basis vector scaled so that its first nonzero entry is 1.
    pub image: Vec<Vec<Scalar>>,
}

pub fn projector_check(r: &RMatrix4) -> ProjectorReport {
    let m = r.at(&Scalar::eta());
    let mut image = m.column_space();
    for v in image.iter_mut() {
        if let Some(lead) = v.iter().find(|s| !s.is_zero()).cloned() {
            for s in v.iter_mut() {
                *s = &*s / &lead;
            }
        }
    }
    let sq = m.mul(&m);
    let lambda = m.entries().find(|(_, _, s)| !s.is_zero()).and_then(|(i, j, s)| {
        let l = &sq[(i, j)] / s;
        (sq == m.scale(&l)).then_some(l)
    });
    ProjectorReport { rank: image.len(), lambda, image }
}

/// `R - 1` restricted to terms of total degree one in (η, ξ).
pub fn linear_part(r: &RMatrix4) -> Matrix {
    let lin = |s: &Scalar| -> Scalar {
        let eta = s.coefficient_of(Var::Eta, 1).and_then(|c| c.coefficient_of(Var::Xi, 0)).unwrap_or_default();
        let xi = s.coefficient_of(Var::Xi, 1).and_then(|c| c.coefficient_of(Var::Eta, 0)).unwrap_or_default();
        eta * Scalar::eta() + xi * Scalar::xi()
    };
    r.m.sub(&Matrix::identity(4)).map(lin)
}

/// `(ρ⊗ρ)(r)` at `u = x`, `v = 0`, with the Casimir part scaled by η and
/// the polynomial part by ξ.
pub fn quantization_direction(r: &ClassicalRMatrix) -> Matrix {
    let scaled = ClassicalRMatrix::yang().scale(&Scalar::eta()).add(&r.polynomial_part().scale(&Scalar::xi()));
    let mut m = Matrix::zeros(4, 4);
    for a in Sl2::BASIS {
        for b in Sl2::BASIS {
            let c = scaled.get(a, b).substitute(&[(Var::V, Scalar::zero())]).expect("no pole at v = 0");
            if !c.is_zero() {
                m = m.add(&rho_basis(a).kron(&rho_basis(b)).scale(&c));
            }
        }
    }
    m
}

/// Linear part of `R - 1` against `-(ρ⊗ρ)(P₁)`; returns the scalar `s`
/// with `linear + (ρ⊗ρ)(P₁) = s·1`, or None if the difference is not a
/// multiple of the identity.
pub fn semiclassical_discrepancy(r: &RMatrix4) -> Option<Scalar> {
    let d = linear_part(r).add(&quantization_direction(&ClassicalRMatrix::p1()));
    let s = d[(0, 0)].clone();
    (d == Matrix::identity(4).scale(&s)).then_some(s)
}

/// All checks of the fundamental-representation layer.
pub fn verify_fundamental() -> Vec<Check> {
    let r = build_r_fund();
    let printed = r_printed();
    let mut out = Vec::new();

    let diff: Vec<String> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| r.m[(i, j)] != printed.m[(i, j)])
        .map(|(i, j)| format!("({}, {}): product {} vs printed {}", i + 1, j + 1, r.m[(i, j)], printed.m[(i, j)]))
        .collect();
    let mut c = Check::new("fundrep/product-vs-printed", "RTT6", CheckVerdict::from_bool(diff.is_empty()));
    c = if diff.is_empty() { c.details("16 entries equal") } else { c.details(diff.join("; ")) };
    out.push(c);

    out.push(check_qybe("R", &r));
    out.push(check_qybe("yang", &yang_r()));
    let ctl = check_qybe("control", &r_control());
    out.push(
        Check::new("fundrep/control/qybe-entry-41", "RTT6", CheckVerdict::from_bool(!ctl.passed()))
            .details(ctl.details.unwrap_or_default()),
    );

    let pr = projector_check(&r);
    let expect = vec![Scalar::zero(), Scalar::one(), Scalar::from_int(-1), -Scalar::xi()];
    out.push(
        Check::new("fundrep/projector/rank", "RTT8", CheckVerdict::from_bool(pr.rank == 1))
            .details(format!("rank {}", pr.rank)),
    );
    out.push(
        Check::new("fundrep/projector/image", "RTT8", CheckVerdict::from_bool(pr.image == vec![expect.clone()]))
            .details(format!("{:?}", pr.image.iter().map(|v| v.iter().map(Scalar::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())),
    );
    let two = Scalar::from_int(2);
    out.push(
        Check::new("fundrep/projector/lambda", "RTT8", CheckVerdict::from_bool(pr.lambda.as_ref() == Some(&two)))
            .details(format!("R(eta)^2 = {} R(eta)", pr.lambda.as_ref().map(Scalar::to_string).unwrap_or("?".into()))),
    );

    let disc = semiclassical_discrepancy(&r);
    let target = -(Scalar::eta() / (Scalar::from_int(2) * x()));
    let ok = disc.as_ref() == Some(&target);
    out.push(
        Check::new("fundrep/semiclassical", "RS4", CheckVerdict::from_bool(ok)).details(match &disc {
            Some(s) => format!("linear part + (rho x rho)(P1) = ({s}) * 1"),
            None => "difference is not a multiple of the identity".into(),
        }),
    );

    let r0 = r.substitute(&[(Var::Xi, Scalar::zero())]);
    let unit = r0.m.mul(&r0.flipped().at(&-x()));
    let phi = Scalar::one() - Scalar::eta() * Scalar::eta() / (x() * x());
    out.push(Check::new(
        "fundrep/unitarity-xi0",
        "RTT2",
        CheckVerdict::from_bool(unit == Matrix::identity(4).scale(&phi)),
    ));

    // 1 + p/x equals R_{η,0}(-η x).
    let rtt2 = Matrix::identity(4).add(&permutation().scale(&(Scalar::one() / x())));
    let rescaled = r0.at(&(-(Scalar::eta() * x())));
    out.push(
        Check::new("fundrep/normalization", "RTT2", CheckVerdict::from_bool(rescaled == rtt2))
            .details("1 + p/x = R(-eta x) at xi = 0"),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_and_generators() {
        let (w, u) = (Scalar::var(Var::W), Scalar::var(Var::U));
        let h = eval_field("h+", &w, &u).unwrap();
        let p = Scalar::eta() / (&w - &u);
        assert_eq!(h[(0, 0)], p);
        assert_eq!(h[(1, 1)], -p.clone());
        let e = eval_field("e-", &w, &u).unwrap();
        assert_eq!(e[(0, 1)], p);
        assert_eq!(eval_field("h", &w, &u).unwrap(), Matrix::from_ints(&[&[1, 0], &[0, -1]]));
        assert_eq!(eval_field("q+", &w, &u), Err(FundError::UnknownSymbol("q+".into())));
    }

    #[test]
    fn fundamental_checks() {
        assert_eq!(build_r_fund(), r_printed());
        let checks = verify_fundamental();
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn grid_round_trip() {
        let r = build_r_fund();
        assert_eq!(RMatrix4::from_grid(&r.to_grid()).unwrap(), r);
    }
}
