//! Named r-matrix structures shared by the CLI and the test suites.

use std::fmt;
use std::str::FromStr;

use postlie_core::liealg::builtin;
use postlie_core::rmatrix::splitting_r;
use postlie_core::{Builtin, Error, LinearEndo, RMatrixContext, Result, Scalar, Theta};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `gl(2)`, upper triangle against strictly lower triangle.
    Gl2Split,
    /// `gl(3)`, upper triangle against strictly lower triangle.
    Gl3Split,
    /// `sl(2)`, `{e, h}` against `{f}`.
    Sl2Borel,
    /// `sl(2)` with `R = id`.
    Sl2Identity,
}

impl Structure {
    pub const ALL: [Structure; 4] = [Structure::Gl2Split, Structure::Gl3Split, Structure::Sl2Borel, Structure::Sl2Identity];

    pub fn name(self) -> &'static str {
        match self {
            Structure::Gl2Split => "gl2-split",
            Structure::Gl3Split => "gl3-split",
            Structure::Sl2Borel => "sl2-borel",
            Structure::Sl2Identity => "sl2-identity",
        }
    }

    pub fn context<S: Scalar>(self) -> Result<RMatrixContext<S>> {
        match self {
            Structure::Gl2Split | Structure::Gl3Split => {
                let n = if self == Structure::Gl2Split { 2 } else { 3 };
                let (g, split) = builtin::<S>(Builtin::UpperLowerSplit(n))?;
                let split = split.expect("split builtin carries its splitting");
                splitting_r(g, &split.plus, &split.minus)
            }
            Structure::Sl2Borel => splitting_r(builtin::<S>(Builtin::Sl2)?.0, &[0, 1], &[2]),
            Structure::Sl2Identity => RMatrixContext::new(builtin::<S>(Builtin::Sl2)?.0, LinearEndo::identity(3), Theta::Mcybe),
        }
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let wanted = text.trim().to_lowercase();
        Structure::ALL.into_iter().find(|s| s.name() == wanted).ok_or_else(|| Error::UnsupportedName(text.to_string()))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
