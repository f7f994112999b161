//! Evaluation of parsed documents against the library.

use serde_json::json;

use super::ast::{Document, Expr, FieldSpec, PlaceExpr, Request, SymbolExpr};
use super::report::{finite_json, Report};
use super::CliError;
use crate::field::{Field, FiniteField, Poly, RatFunc, RationalFunctionField, MAX_FIELD_ORDER};
use crate::framed::{homotopy_check, rho, support, FramedBase, FramedDatum, HomotopyDatum, HomotopyMode};
use crate::framing::{apply_transvections, reduce_to_projection, Matrix};
use crate::milnor::{
    canonical, residue_field_of, tame_symbol, CanonicalForm, Canonicalize, FiniteCanonical, MilnorElement, Place,
};
use crate::reciprocity::{smooth_curve_check, verify_weil};

type FunctionField = RationalFunctionField<FiniteField>;
type Vars<F> = Vec<(String, <F as Field>::Elem)>;

fn eval<F: Field>(e: &Expr, k: &F, vars: &Vars<F>) -> Result<F::Elem, CliError> {
    let go = |e: &Expr| eval(e, k, vars);
    Ok(match e {
        Expr::Int(n) => k.from_int((n % k.characteristic()) as i64),
        Expr::Var(v) => match vars.iter().find(|(name, _)| name == v) {
            Some((_, x)) => x.clone(),
            None => return Err(CliError::semantic(format!("unknown variable '{v}' over {}", k.name()))),
        },
        Expr::Neg(a) => k.neg(&go(a)?),
        Expr::Add(a, b) => k.add(&go(a)?, &go(b)?),
        Expr::Sub(a, b) => k.sub(&go(a)?, &go(b)?),
        Expr::Mul(a, b) => k.mul(&go(a)?, &go(b)?),
        Expr::Div(a, b) => {
            let d = go(b)?;
            k.div(&go(a)?, &d).ok_or_else(|| CliError::semantic(format!("division by zero: {b} is 0")))?
        }
        Expr::Pow(a, n) => {
            let x = go(a)?;
            k.pow_signed(&x, *n).ok_or_else(|| CliError::semantic(format!("{a} is 0 and has no inverse")))?
        }
    })
}

fn lift<K: Field>(kx: &RationalFunctionField<K>, vars: &Vars<K>) -> Vars<RationalFunctionField<K>> {
    vars.iter().map(|(n, v)| (n.clone(), kx.constant(v.clone()))).collect()
}

/// `K(var)` with `var` bound to the generator.
fn adjoin<K: Field>(
    k: &K,
    vars: &Vars<K>,
    var: &str,
    purpose: &str,
) -> Result<(RationalFunctionField<K>, Vars<RationalFunctionField<K>>), CliError> {
    if vars.iter().any(|(n, _)| n == var) {
        return Err(CliError::semantic(format!(
            "variable '{var}' is reserved in {purpose} requests; rename the field variable"
        )));
    }
    let kx = RationalFunctionField::new(k.clone(), var);
    let mut out = lift(&kx, vars);
    out.push((var.to_string(), kx.variable()));
    Ok((kx, out))
}

fn as_poly<K: Field>(r: RatFunc<K>, what: &str, var: &str) -> Result<Poly<K>, CliError> {
    if r.is_poly() {
        Ok(r.num().clone())
    } else {
        Err(CliError::semantic(format!("{what} must be a polynomial in {var}")))
    }
}

enum Base {
    Finite(FiniteField, Vars<FiniteField>),
    Function(FunctionField, Vars<FunctionField>),
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d) || d * d > q).map(|d| if q.is_multiple_of(d) { d } else { q })?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

pub(super) fn build_finite(spec: &FieldSpec) -> Result<(FiniteField, Vars<FiniteField>), CliError> {
    let q = spec.order;
    let (p, e) = prime_power(q).ok_or_else(|| CliError::semantic(format!("F{q}: {q} is not a prime power")))?;
    if q > MAX_FIELD_ORDER {
        return Err(CliError::semantic(format!("F{q}: order exceeds the supported bound {MAX_FIELD_ORDER}")));
    }
    let fp = FiniteField::prime(p).map_err(CliError::semantic)?;
    let (k, var) = match &spec.modulus {
        None if e == 1 => return Ok((fp, Vec::new())),
        None => (FiniteField::with_degree(p, e, "a").map_err(CliError::semantic)?, "a".to_string()),
        Some(_) if e == 1 => return Err(CliError::semantic(format!("F{q} is a prime field and takes no modulus"))),
        Some(m) => {
            let mut names = Vec::new();
            m.variables(&mut names);
            let [v] = names.as_slice() else {
                return Err(CliError::semantic(format!("modulus {m} must be a polynomial in one variable")));
            };
            let (ring, vars) = adjoin(&fp, &Vec::new(), v, "modulus")?;
            let poly = as_poly(eval(m, &ring, &vars)?, "modulus", v)?;
            if poly.deg() != e as usize {
                return Err(CliError::semantic(format!(
                    "modulus {} has degree {} but F{q} needs degree {e}",
                    poly.format(v),
                    poly.deg()
                )));
            }
            (FiniteField::extension(&fp, &poly, v).map_err(CliError::semantic)?, v.clone())
        }
    };
    let g = k.generator_of_extension().expect("proper extension");
    Ok((k, vec![(var, g)]))
}

fn build_base(spec: &FieldSpec) -> Result<Base, CliError> {
    let (k, vars) = build_finite(spec)?;
    match &spec.function_var {
        None => Ok(Base::Finite(k, vars)),
        Some(v) => {
            if vars.iter().any(|(n, _)| n == v) {
                return Err(CliError::semantic(format!("'{v}' names both the extension and the function variable")));
            }
            let kt = RationalFunctionField::new(k, v);
            let mut tv = lift(&kt, &vars);
            tv.push((v.clone(), kt.variable()));
            Ok(Base::Function(kt, tv))
        }
    }
}

fn symbol<F: Field>(s: &SymbolExpr, k: &F, vars: &Vars<F>) -> Result<MilnorElement<F>, CliError> {
    let degree = s.terms.first().map_or(0, |(_, entries)| entries.len());
    let mut terms = Vec::with_capacity(s.terms.len());
    for (i, (c, entries)) in s.terms.iter().enumerate() {
        if entries.len() != degree {
            return Err(CliError::semantic(format!("term {} has {} entries, expected {degree}", i + 1, entries.len())));
        }
        let mut values = Vec::with_capacity(degree);
        for (j, e) in entries.iter().enumerate() {
            let v = eval(e, k, vars)?;
            if k.is_zero(&v) {
                return Err(CliError::semantic(format!("zero entry: slot {} of term {} is 0", j + 1, i + 1)));
            }
            values.push(v);
        }
        terms.push((*c, values));
    }
    MilnorElement::from_terms(k, degree, terms).map_err(CliError::semantic)
}

fn finite_class(a: &MilnorElement<FiniteField>) -> Result<FiniteCanonical, CliError> {
    match canonical(a).map_err(CliError::semantic)? {
        CanonicalForm::Finite(c) => Ok(c),
        CanonicalForm::Function(_) => unreachable!("finite field input"),
    }
}

fn function_only<'a>(base: &'a Base, what: &str) -> Result<(&'a FunctionField, &'a Vars<FunctionField>), CliError> {
    match base {
        Base::Function(kt, vars) => Ok((kt, vars)),
        Base::Finite(k, _) => {
            Err(CliError::semantic(format!("{what} needs a rational function field such as {}(t)", k.name())))
        }
    }
}

fn normalize<F: Canonicalize>(k: &F, vars: &Vars<F>, s: &SymbolExpr, r: &mut Report) -> Result<(), CliError> {
    let a = symbol(s, k, vars)?;
    let c = canonical(&a).map_err(CliError::semantic)?;
    r.count("degree", a.degree());
    r.canonical("class", &c);
    r.flag("zero", c.is_zero());
    Ok(())
}

fn tame(base: &Base, s: &SymbolExpr, place: &PlaceExpr, r: &mut Report) -> Result<(), CliError> {
    let (kt, vars) = function_only(base, "tame")?;
    let a = symbol(s, kt, vars)?;
    let place = match place {
        PlaceExpr::Infinity => Place::Infinity,
        PlaceExpr::Finite(e) => Place::Finite(as_poly(eval(e, kt, vars)?, "a place", kt.var())?),
    };
    let residue_field = residue_field_of(kt, &place).map_err(CliError::semantic)?;
    let residue = tame_symbol(&a, &place).map_err(CliError::semantic)?;
    r.kv("place", place.format(kt.var()));
    r.kv("residue_field", residue_field.name());
    r.count("degree", residue.degree());
    r.finite("residue", &finite_class(&residue)?);
    Ok(())
}

fn reciprocity(base: &Base, s: &SymbolExpr, r: &mut Report) -> Result<(), CliError> {
    let (kt, vars) = function_only(base, "reciprocity")?;
    let a = symbol(s, kt, vars)?;
    if a.degree() == 0 {
        return Err(CliError::semantic("reciprocity needs symbols of degree at least 1"));
    }
    let report = verify_weil(&a).map_err(CliError::semantic)?;
    r.count("degree", a.degree());
    for entry in &report.entries {
        let (local, traced) = (finite_class(&entry.residue)?, finite_class(&entry.transferred)?);
        let place = entry.place.format(kt.var());
        let field = entry.residue.field().name();
        r.record(
            "residue",
            format!("{place} field={field} value={local} trace={traced}"),
            json!({ "place": place, "field": field, "value": finite_json(&local), "trace": finite_json(&traced) }),
        );
    }
    r.finite("total", &report.total);
    r.flag("holds", report.holds());
    if !report.holds() {
        r.fail();
    }
    Ok(())
}

fn smooth(base: &Base, f: &Expr, g: &[Expr], r: &mut Report) -> Result<(), CliError> {
    let (kt, vars) = function_only(base, "smooth")?;
    let fv = eval(f, kt, vars)?;
    let gs = g.iter().map(|e| eval(e, kt, vars)).collect::<Result<Vec<_>, _>>()?;
    let report = smooth_curve_check(kt, &gs, &fv).map_err(CliError::semantic)?;
    r.finite("zero_side", &report.zero_side);
    r.finite("pole_side", &report.pole_side);
    r.flag("equal", report.equal);
    r.flag("hypothesis", report.hypothesis);
    if report.hypothesis && !report.equal {
        r.fail();
    }
    Ok(())
}

fn rho_request<K: FramedBase>(k: &K, vars: &Vars<K>, f: &Expr, g: &[Expr], r: &mut Report) -> Result<(), CliError> {
    let (kx, xv) = adjoin(k, vars, "x", "rho")?;
    let framing = as_poly(eval(f, &kx, &xv)?, "f", "x")?;
    let targets = g.iter().map(|e| eval(e, &kx, &xv)).collect::<Result<Vec<_>, _>>()?;
    let datum = FramedDatum::new(framing, targets).map_err(CliError::semantic)?;
    r.count("degree", datum.degree());
    for point in support(&datum).map_err(CliError::semantic)? {
        let (pi, field) = (point.pi.format("x"), point.residue_name(k));
        r.record(
            "point",
            format!("{pi} mult={} residue_field={field}", point.multiplicity),
            json!({ "pi": pi, "mult": point.multiplicity, "residue_field": field }),
        );
    }
    r.canonical("rho", &rho(&datum).map_err(CliError::semantic)?);
    Ok(())
}

type TPoly<K> = Poly<RationalFunctionField<K>>;

/// Scales `n / d` in `k(t)[x]` so that every coefficient is a polynomial in
/// `t` and the coefficients have no common factor.
fn primitive_pair<K: Field>(kt: &RationalFunctionField<K>, n: &TPoly<K>, d: &TPoly<K>) -> (TPoly<K>, TPoly<K>) {
    let base = kt.base();
    let mut l = Poly::one(base);
    for c in n.coeffs().iter().chain(d.coeffs()) {
        l = l.mul(c.den()).div_exact(&l.gcd(c.den())).expect("gcd divides");
    }
    let scale = kt.from_poly(l);
    let (n, d) = (n.scale(&scale), d.scale(&scale));
    let mut g = Poly::zero(base);
    for c in n.coeffs().iter().chain(d.coeffs()) {
        g = g.gcd(c.num());
    }
    let inv = kt.inv(&kt.from_poly(g)).expect("nonzero content");
    (n.scale(&inv), d.scale(&inv))
}

fn homotopy_request<K: FramedBase>(
    k: &K,
    vars: &Vars<K>,
    family: &Expr,
    g: &[Expr],
    mode: HomotopyMode,
    r: &mut Report,
) -> Result<(), CliError> {
    let (kt, tv) = adjoin(k, vars, "t", "homotopy")?;
    let (ktx, xv) = adjoin(&kt, &tv, "x", "homotopy")?;
    let family = as_poly(eval(family, &ktx, &xv)?, "F", "x")?;
    let mut targets = Vec::with_capacity(g.len());
    for e in g {
        let v = eval(e, &ktx, &xv)?;
        targets.push(primitive_pair(&kt, v.num(), v.den()));
    }
    let datum = HomotopyDatum::new(kt, family, targets, mode).map_err(CliError::semantic)?;
    let report = homotopy_check(&datum).map_err(CliError::semantic)?;
    r.kv("mode", mode.name());
    r.canonical("rho0", &report.rho0);
    r.canonical("rho1", &report.rho1);
    r.flag("equal", report.equal);
    r.flag("guaranteed", report.guaranteed);
    if report.guaranteed && !report.equal {
        r.fail();
    }
    Ok(())
}

fn matrix_request<F: Field>(k: &F, vars: &Vars<F>, rows: &[Vec<Expr>], r: &mut Report) -> Result<(), CliError> {
    let values = rows
        .iter()
        .map(|row| row.iter().map(|e| eval(e, k, vars)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let a = Matrix::from_rows(k, values).map_err(CliError::semantic)?;
    let ops = reduce_to_projection(&a).map_err(CliError::semantic)?;
    r.count("rows", a.rows());
    r.count("cols", a.cols());
    r.count("steps", ops.len());
    for t in &ops {
        r.kv("step", t.format(k));
    }
    let ok = apply_transvections(&a, &ops).is_projection();
    r.kv("check", if ok { "ok" } else { "failed" });
    if !ok {
        r.fail();
    }
    Ok(())
}

/// Evaluates a parsed document. `mode` overrides the document's homotopy
/// mode; strict is the default.
pub fn execute(doc: &Document, mode: Option<HomotopyMode>) -> Result<Report, CliError> {
    let base = build_base(&doc.field)?;
    let mut r = Report::new(doc.request.command());
    r.kv(
        "field",
        match &base {
            Base::Finite(k, _) => k.name(),
            Base::Function(kt, _) => kt.name(),
        },
    );
    match &doc.request {
        Request::Normalize(s) => match &base {
            Base::Finite(k, v) => normalize(k, v, s, &mut r)?,
            Base::Function(k, v) => normalize(k, v, s, &mut r)?,
        },
        Request::Tame { symbol, place } => tame(&base, symbol, place, &mut r)?,
        Request::Reciprocity(s) => reciprocity(&base, s, &mut r)?,
        Request::Smooth { f, g } => smooth(&base, f, g, &mut r)?,
        Request::Rho { f, g } => match &base {
            Base::Finite(k, v) => rho_request(k, v, f, g, &mut r)?,
            Base::Function(k, v) => rho_request(k, v, f, g, &mut r)?,
        },
        Request::Homotopy { family, g, mode: doc_mode } => {
            let mode = mode.or(*doc_mode).unwrap_or(HomotopyMode::Strict);
            match &base {
                Base::Finite(k, v) => homotopy_request(k, v, family, g, mode, &mut r)?,
                Base::Function(k, v) => homotopy_request(k, v, family, g, mode, &mut r)?,
            }
        }
        Request::Matrix(rows) => match &base {
            Base::Finite(k, v) => matrix_request(k, v, rows, &mut r)?,
            Base::Function(k, v) => matrix_request(k, v, rows, &mut r)?,
        },
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
