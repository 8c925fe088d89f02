//! Signature table for the supported FlatZinc builtins.
//!
//! The table is the union of the 2.2.1 and 2.3.2 builtin lists for the
//! bool/int/float linear, comparison, array, element and set families,
//! plus the directly-encoded globals. Anything not listed here is a hard
//! parse error naming the builtin. Version-specific `fzn_`-prefixed global
//! names are accepted as aliases of the plain names.

/// Expected shape of one constraint argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bool,
    Int,
    Float,
    /// Set variable or set literal.
    Set,
    /// Integer literal (parameters are resolved before checking).
    ParInt,
    ParSet,
    ArrBool,
    ArrInt,
    ArrFloat,
    ArrParBool,
    ArrParInt,
    ArrParFloat,
}

#[derive(Debug, Clone, Copy)]
pub struct Sig {
    pub name: &'static str,
    pub args: &'static [Kind],
}

use Kind::*;

static SIGS: &[Sig] = &[
    // bool
    Sig { name: "bool2int", args: &[Bool, Int] },
    Sig { name: "bool_not", args: &[Bool, Bool] },
    Sig { name: "bool_and", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_or", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_xor", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_xor", args: &[Bool, Bool] },
    Sig { name: "bool_eq", args: &[Bool, Bool] },
    Sig { name: "bool_eq_reif", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_le", args: &[Bool, Bool] },
    Sig { name: "bool_le_reif", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_lt", args: &[Bool, Bool] },
    Sig { name: "bool_lt_reif", args: &[Bool, Bool, Bool] },
    Sig { name: "bool_clause", args: &[ArrBool, ArrBool] },
    Sig { name: "array_bool_and", args: &[ArrBool, Bool] },
    Sig { name: "array_bool_or", args: &[ArrBool, Bool] },
    Sig { name: "array_bool_xor", args: &[ArrBool] },
    Sig { name: "array_bool_element", args: &[Int, ArrParBool, Bool] },
    Sig { name: "array_var_bool_element", args: &[Int, ArrBool, Bool] },
    Sig { name: "bool_lin_eq", args: &[ArrParInt, ArrBool, Int] },
    Sig { name: "bool_lin_le", args: &[ArrParInt, ArrBool, ParInt] },
    // int
    Sig { name: "int_abs", args: &[Int, Int] },
    Sig { name: "int_plus", args: &[Int, Int, Int] },
    Sig { name: "int_times", args: &[Int, Int, Int] },
    Sig { name: "int_div", args: &[Int, Int, Int] },
    Sig { name: "int_mod", args: &[Int, Int, Int] },
    Sig { name: "int_max", args: &[Int, Int, Int] },
    Sig { name: "int_min", args: &[Int, Int, Int] },
    Sig { name: "int_eq", args: &[Int, Int] },
    Sig { name: "int_ne", args: &[Int, Int] },
    Sig { name: "int_le", args: &[Int, Int] },
    Sig { name: "int_lt", args: &[Int, Int] },
    Sig { name: "int_eq_reif", args: &[Int, Int, Bool] },
    Sig { name: "int_ne_reif", args: &[Int, Int, Bool] },
    Sig { name: "int_le_reif", args: &[Int, Int, Bool] },
    Sig { name: "int_lt_reif", args: &[Int, Int, Bool] },
    Sig { name: "int_lin_eq", args: &[ArrParInt, ArrInt, ParInt] },
    Sig { name: "int_lin_ne", args: &[ArrParInt, ArrInt, ParInt] },
    Sig { name: "int_lin_le", args: &[ArrParInt, ArrInt, ParInt] },
    Sig { name: "int_lin_eq_reif", args: &[ArrParInt, ArrInt, ParInt, Bool] },
    Sig { name: "int_lin_ne_reif", args: &[ArrParInt, ArrInt, ParInt, Bool] },
    Sig { name: "int_lin_le_reif", args: &[ArrParInt, ArrInt, ParInt, Bool] },
    Sig { name: "array_int_element", args: &[Int, ArrParInt, Int] },
    Sig { name: "array_var_int_element", args: &[Int, ArrInt, Int] },
    Sig { name: "array_int_maximum", args: &[Int, ArrInt] },
    Sig { name: "array_int_minimum", args: &[Int, ArrInt] },
    // float
    Sig { name: "int2float", args: &[Int, Float] },
    Sig { name: "float_abs", args: &[Float, Float] },
    Sig { name: "float_plus", args: &[Float, Float, Float] },
    Sig { name: "float_times", args: &[Float, Float, Float] },
    Sig { name: "float_div", args: &[Float, Float, Float] },
    Sig { name: "float_max", args: &[Float, Float, Float] },
    Sig { name: "float_min", args: &[Float, Float, Float] },
    Sig { name: "float_eq", args: &[Float, Float] },
    Sig { name: "float_ne", args: &[Float, Float] },
    Sig { name: "float_le", args: &[Float, Float] },
    Sig { name: "float_lt", args: &[Float, Float] },
    Sig { name: "float_eq_reif", args: &[Float, Float, Bool] },
    Sig { name: "float_ne_reif", args: &[Float, Float, Bool] },
    Sig { name: "float_le_reif", args: &[Float, Float, Bool] },
    Sig { name: "float_lt_reif", args: &[Float, Float, Bool] },
    Sig { name: "float_lin_eq", args: &[ArrParFloat, ArrFloat, Float] },
    Sig { name: "float_lin_ne", args: &[ArrParFloat, ArrFloat, Float] },
    Sig { name: "float_lin_le", args: &[ArrParFloat, ArrFloat, Float] },
    Sig { name: "float_lin_lt", args: &[ArrParFloat, ArrFloat, Float] },
    Sig { name: "float_lin_eq_reif", args: &[ArrParFloat, ArrFloat, Float, Bool] },
    Sig { name: "float_lin_le_reif", args: &[ArrParFloat, ArrFloat, Float, Bool] },
    Sig { name: "array_float_element", args: &[Int, ArrParFloat, Float] },
    Sig { name: "array_var_float_element", args: &[Int, ArrFloat, Float] },
    Sig { name: "array_float_maximum", args: &[Float, ArrFloat] },
    Sig { name: "array_float_minimum", args: &[Float, ArrFloat] },
    // set
    Sig { name: "set_in", args: &[Int, Set] },
    Sig { name: "set_in_reif", args: &[Int, Set, Bool] },
    Sig { name: "set_eq", args: &[Set, Set] },
    Sig { name: "set_ne", args: &[Set, Set] },
    Sig { name: "set_subset", args: &[Set, Set] },
    Sig { name: "set_card", args: &[Set, Int] },
    Sig { name: "set_union", args: &[Set, Set, Set] },
    Sig { name: "set_intersect", args: &[Set, Set, Set] },
    Sig { name: "set_diff", args: &[Set, Set, Set] },
    // globals encoded by decomposition
    Sig { name: "all_different_int", args: &[ArrInt] },
    Sig { name: "count_eq", args: &[ArrInt, Int, Int] },
    Sig { name: "table_int", args: &[ArrInt, ArrParInt] },
];

/// Canonical name for version-specific aliases.
pub fn canonical_name(name: &str) -> &str {
    match name {
        "fzn_all_different_int" | "alldifferent_int" => "all_different_int",
        "fzn_count_eq" | "count" => "count_eq",
        "fzn_table_int" => "table_int",
        "maximum_int" => "array_int_maximum",
        "minimum_int" => "array_int_minimum",
        other => other,
    }
}

/// All signatures registered under a canonical name.
pub fn signatures(canonical: &str) -> Vec<&'static Sig> {
    SIGS.iter().filter(|s| s.name == canonical).collect()
}

/// Names of every supported builtin (canonical spellings), for coverage
/// accounting in tests.
pub fn supported_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = SIGS.iter().map(|s| s.name).collect();
    names.sort_unstable();
    names.dedup();
    names
}
