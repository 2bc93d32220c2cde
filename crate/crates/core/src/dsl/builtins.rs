use std::sync::Arc;

use super::eval::Value;
use super::types::TypeTag::{self, Bool as B, Model as M, Number as N, ValBool as VB, ValNumber as VN};
use crate::grid::{border, BoolImage, GridDims};
use crate::imaging::{self, ArithOp, Channel, CmpOp, NumOp, Operand};
use crate::spatial::{self, Comparator, DistInterval};
use crate::texture::{self, Binning, TextureMode, WindowSpec};
use crate::{metrics, Adjacency, Error, IntensityMode, Result};

/// A native operation; the evaluator dispatches on this.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    True,
    False,
    Border,
    Intensity,
    Channel(Channel),
    Min,
    Max,
    Volume,
    IfB,
    Near,
    Interior,
    MaxVol,
    Touch,
    Grow,
    Surrounded,
    Smoothen,
    Dist(Comparator),
    CrossCorrelation,
    Ppm,
    And,
    Or,
    Not,
    BoolAnd,
    BoolOr,
    BoolNot,
    VoxArith(ArithOp),
    VoxArithNum(ArithOp),
    VoxCmp(CmpOp),
    VoxCmpNum(CmpOp),
    NumArith(NumOp),
    NumCmp(CmpOp),
}

/// One overload: a name (or operator symbol), its parameter types and result.
#[derive(Clone, Copy, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub params: &'static [TypeTag],
    pub result: TypeTag,
    pub prim: Prim,
}

const fn b(name: &'static str, params: &'static [TypeTag], result: TypeTag, prim: Prim) -> Builtin {
    Builtin {
        name,
        params,
        result,
        prim,
    }
}

static TABLE: &[Builtin] = &[
    b("tt", &[], VB, Prim::True),
    b("ff", &[], VB, Prim::False),
    b("border", &[], VB, Prim::Border),
    b("intensity", &[M], VN, Prim::Intensity),
    b("red", &[M], VN, Prim::Channel(Channel::Red)),
    b("green", &[M], VN, Prim::Channel(Channel::Green)),
    b("blue", &[M], VN, Prim::Channel(Channel::Blue)),
    b("min", &[VN], N, Prim::Min),
    b("max", &[VN], N, Prim::Max),
    b("volume", &[VB], N, Prim::Volume),
    b("ifB", &[B, VB, VB], VB, Prim::IfB),
    b("near", &[VB], VB, Prim::Near),
    b("interior", &[VB], VB, Prim::Interior),
    b("maxvol", &[VB], VB, Prim::MaxVol),
    b("touch", &[VB, VB], VB, Prim::Touch),
    b("grow", &[VB, VB], VB, Prim::Grow),
    b("smoothen", &[VB, N], VB, Prim::Smoothen),
    b("distleq", &[N, VB], VB, Prim::Dist(Comparator::Leq)),
    b("distlt", &[N, VB], VB, Prim::Dist(Comparator::Lt)),
    b("distgeq", &[N, VB], VB, Prim::Dist(Comparator::Geq)),
    b("crossCorrelation", &[N, VN, VN, VB, N, N, N], VN, Prim::CrossCorrelation),
    b("ppM", &[VB], N, Prim::Ppm),
    b("S", &[VB, VB], VB, Prim::Surrounded),
    b("&", &[VB, VB], VB, Prim::And),
    b("&", &[B, B], B, Prim::BoolAnd),
    b("|", &[VB, VB], VB, Prim::Or),
    b("|", &[B, B], B, Prim::BoolOr),
    b("!", &[VB], VB, Prim::Not),
    b("!", &[B], B, Prim::BoolNot),
    b("+", &[VN, VN], VN, Prim::VoxArith(ArithOp::Add)),
    b("-", &[VN, VN], VN, Prim::VoxArith(ArithOp::Sub)),
    b("*", &[VN, VN], VN, Prim::VoxArith(ArithOp::Mul)),
    b("+.", &[VN, N], VN, Prim::VoxArithNum(ArithOp::Add)),
    b("-.", &[VN, N], VN, Prim::VoxArithNum(ArithOp::Sub)),
    b("*.", &[VN, N], VN, Prim::VoxArithNum(ArithOp::Mul)),
    b(">", &[VN, VN], VB, Prim::VoxCmp(CmpOp::Gt)),
    b("<", &[VN, VN], VB, Prim::VoxCmp(CmpOp::Lt)),
    b(">=", &[VN, VN], VB, Prim::VoxCmp(CmpOp::Geq)),
    b("<=", &[VN, VN], VB, Prim::VoxCmp(CmpOp::Leq)),
    b(">.", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Gt)),
    b("<.", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Lt)),
    b(">=.", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Geq)),
    b("<=.", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Leq)),
    // undotted spellings also accept a number on the right
    b(">", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Gt)),
    b("<", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Lt)),
    b(">=", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Geq)),
    b("<=", &[VN, N], VB, Prim::VoxCmpNum(CmpOp::Leq)),
    b(".+.", &[N, N], N, Prim::NumArith(NumOp::Add)),
    b(".-.", &[N, N], N, Prim::NumArith(NumOp::Sub)),
    b(".*.", &[N, N], N, Prim::NumArith(NumOp::Mul)),
    b("./.", &[N, N], N, Prim::NumArith(NumOp::Div)),
    b(".<.", &[N, N], B, Prim::NumCmp(CmpOp::Lt)),
    b(".>.", &[N, N], B, Prim::NumCmp(CmpOp::Gt)),
    b(".<=.", &[N, N], B, Prim::NumCmp(CmpOp::Leq)),
    b(".>=.", &[N, N], B, Prim::NumCmp(CmpOp::Geq)),
];

/// Every native overload, in registration order.
pub fn builtin_table() -> &'static [Builtin] {
    TABLE
}

pub(crate) fn is_builtin(name: &str) -> bool {
    TABLE.iter().any(|b| b.name == name)
}

pub(crate) enum Resolution {
    Found(&'static Builtin),
    Unknown,
    Arity(Vec<usize>),
    Type(Vec<&'static Builtin>),
}

pub(crate) fn resolve(name: &str, args: &[TypeTag]) -> Resolution {
    let candidates: Vec<&'static Builtin> = TABLE.iter().filter(|b| b.name == name).collect();
    if candidates.is_empty() {
        return Resolution::Unknown;
    }
    let same_arity: Vec<_> = candidates
        .iter()
        .copied()
        .filter(|b| b.params.len() == args.len())
        .collect();
    if same_arity.is_empty() {
        let mut arities: Vec<usize> = candidates.iter().map(|b| b.params.len()).collect();
        arities.dedup();
        return Resolution::Arity(arities);
    }
    match same_arity.iter().find(|b| b.params == args) {
        Some(b) => Resolution::Found(b),
        None => Resolution::Type(same_arity),
    }
}

pub(crate) fn signature(b: &Builtin) -> String {
    let params: Vec<String> = b.params.iter().map(|t| t.to_string()).collect();
    format!("{}({}) -> {}", b.name, params.join(", "), b.result)
}

/// Settings that affect how primitives compute.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Context {
    pub dims: Option<GridDims>,
    pub adjacency: Adjacency,
    pub intensity: IntensityMode,
    pub texture: TextureMode,
}

impl Context {
    fn dims(&self) -> Result<GridDims> {
        self.dims.ok_or_else(|| {
            Error::InvalidArgument("no image has been loaded, so the space is undefined".into())
        })
    }
}

fn mask(img: BoolImage) -> Value {
    Value::Mask(Arc::new(img))
}

fn scalar(img: crate::ScalarImage) -> Value {
    Value::Scalar(Arc::new(img))
}

/// Applies a primitive to already evaluated arguments.
pub(crate) fn apply(prim: Prim, args: &[Value], ctx: &Context) -> Result<Value> {
    let adj = ctx.adjacency;
    let num = |i: usize| args[i].as_number();
    let vb = |i: usize| args[i].as_mask();
    let vn = |i: usize| args[i].as_scalar();
    Ok(match prim {
        Prim::True => mask(BoolImage::filled(ctx.dims()?, true)),
        Prim::False => mask(BoolImage::filled(ctx.dims()?, false)),
        Prim::Border => mask(border(ctx.dims()?)),
        Prim::Intensity => scalar(imaging::intensity(args[0].as_model(), ctx.intensity)),
        Prim::Channel(c) => scalar(imaging::color_proj(args[0].as_model(), c)),
        Prim::Min => Value::Number(vn(0).min()),
        Prim::Max => Value::Number(vn(0).max()),
        Prim::Volume => Value::Number(vb(0).volume()),
        Prim::IfB => mask(imaging::if_b(args[0].as_bool(), vb(1), vb(2))?),
        Prim::Near => mask(spatial::closure(vb(0), adj)),
        Prim::Interior => mask(spatial::interior(vb(0), adj)),
        Prim::MaxVol => mask(spatial::maxvol(vb(0), adj)),
        Prim::Touch => mask(spatial::touch(vb(0), vb(1), adj)?),
        Prim::Grow => mask(spatial::grow(vb(0), vb(1), adj)?),
        Prim::Surrounded => mask(spatial::surrounded(vb(0), vb(1), adj)?),
        Prim::Smoothen => mask(spatial::smoothen(num(1), vb(0))?),
        Prim::Dist(cmp) => mask(spatial::dist_predicate(
            vb(1),
            DistInterval::new(cmp, num(0))?,
        )),
        Prim::CrossCorrelation => {
            let k = num(6);
            if !(k >= 1.0 && k.fract() == 0.0 && k <= u32::MAX as f64) {
                return Err(Error::InvalidArgument(format!(
                    "bin count must be a positive integer, got {k}"
                )));
            }
            scalar(texture::cross_correlation_map(
                WindowSpec::new(num(0))?,
                vn(1),
                vn(2),
                vb(3),
                Binning::new(num(4), num(5), k as usize)?,
                ctx.texture,
            )?)
        }
        Prim::Ppm => Value::Number(metrics::ppm(vb(0), adj)),
        Prim::And => mask(vb(0).and(vb(1))?),
        Prim::Or => mask(vb(0).or(vb(1))?),
        Prim::Not => mask(vb(0).not()),
        Prim::BoolAnd => Value::Bool(args[0].as_bool() && args[1].as_bool()),
        Prim::BoolOr => Value::Bool(args[0].as_bool() || args[1].as_bool()),
        Prim::BoolNot => Value::Bool(!args[0].as_bool()),
        Prim::VoxArith(op) => scalar(imaging::voxel_arith(op, vn(0), Operand::Image(vn(1)))?),
        Prim::VoxArithNum(op) => scalar(imaging::voxel_arith(op, vn(0), Operand::Number(num(1)))?),
        Prim::VoxCmp(op) => mask(imaging::voxel_cmp(op, vn(0), Operand::Image(vn(1)))?),
        Prim::VoxCmpNum(op) => mask(imaging::voxel_cmp(op, vn(0), Operand::Number(num(1)))?),
        Prim::NumArith(op) => Value::Number(imaging::num_arith(op, num(0), num(1))?),
        Prim::NumCmp(op) => Value::Bool(imaging::num_cmp(op, num(0), num(1))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overloads_resolve_by_type() {
        assert!(matches!(resolve("&", &[VB, VB]), Resolution::Found(b) if b.prim == Prim::And));
        assert!(matches!(resolve("&", &[B, B]), Resolution::Found(b) if b.prim == Prim::BoolAnd));
        assert!(matches!(resolve("&", &[N, N]), Resolution::Type(_)));
        assert!(matches!(resolve("&", &[N]), Resolution::Arity(_)));
        assert!(matches!(resolve("nope", &[]), Resolution::Unknown));
        assert!(matches!(
            resolve("crossCorrelation", &[N, VN, VN, VB, N, N, N]),
            Resolution::Found(b) if b.result == VN
        ));
    }

    #[test]
    fn table_has_required_names() {
        for name in [
            "intensity", "red", "green", "blue", "min", "max", "volume", "border", "tt", "ff",
            "ifB", "near", "interior", "touch", "grow", "smoothen", "maxvol", "distleq",
            "distlt", "distgeq", "crossCorrelation", "S", "&", "|", "!", "ppM",
        ] {
            assert!(is_builtin(name), "{name}");
        }
        // no two overloads share a full signature
        for (i, a) in TABLE.iter().enumerate() {
            for b in &TABLE[i + 1..] {
                assert!(!(a.name == b.name && a.params == b.params), "{}", signature(a));
            }
        }
    }
}
