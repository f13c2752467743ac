//! JSON export of schemes and order reports. Floats are written in
//! scientific notation with 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::coeffs::{CompositionScheme, SymmetryClass};
use crate::order::OrderReport;
use crate::scalar::Real;

/// Pretty JSON formatter printing every float as `{:.16e}`.
struct SciFormatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", f64::from(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Serializes any value with the scientific float format.
pub fn to_json_string<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeJson {
    pub label: String,
    pub declared_order: u32,
    pub symmetry: SymmetryClass,
    pub alphas: Vec<CoefficientJson>,
}

impl<T: Real> From<&CompositionScheme<T>> for SchemeJson {
    fn from(s: &CompositionScheme<T>) -> Self {
        SchemeJson {
            label: s.label().to_string(),
            declared_order: s.declared_order(),
            symmetry: s.symmetry(),
            alphas: s
                .alphas()
                .iter()
                .map(|z| CoefficientJson {
                    re: z.re.as_f64(),
                    im: z.im.as_f64(),
                })
                .collect(),
        }
    }
}

pub fn schemes_to_json<T: Real>(schemes: &[CompositionScheme<T>]) -> String {
    let out: Vec<SchemeJson> = schemes.iter().map(SchemeJson::from).collect();
    to_json_string(&out)
}

pub fn report_to_json(report: &OrderReport) -> String {
    to_json_string(report)
}
