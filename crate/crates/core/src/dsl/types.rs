use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeTag {
    Number,
    Bool,
    String,
    Model,
    /// `Valuation(Number)`: a scalar image.
    ValNumber,
    /// `Valuation(Bool)`: a boolean image.
    ValBool,
}

impl TypeTag {
    pub fn is_valuation(self) -> bool {
        matches!(self, TypeTag::ValNumber | TypeTag::ValBool)
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::Number => "Number",
            TypeTag::Bool => "Bool",
            TypeTag::String => "String",
            TypeTag::Model => "Model",
            TypeTag::ValNumber => "Valuation(Number)",
            TypeTag::ValBool => "Valuation(Bool)",
        })
    }
}
