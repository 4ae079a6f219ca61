//! Quantization machinery at truncation order: associator, Verma-module
//! computations, the twist and R-matrix, the deformed coproduct, the
//! two-parameter generator family, and the biquantization-square checks.

pub mod associator;
pub mod generators;
pub mod quantize;
pub mod verma;

pub use associator::{associator, AssociatorTable};
pub use generators::{
    expand_in_plus_generators, expand_in_plus_generators_within, form_on_minus, form_on_plus, generator_minus, generator_plus,
    pair_biquant, p_u, p_v, rho_minus, rho_plus, square_check, SquareReport,
};
pub use quantize::Quantization;
pub use verma::{from_verma_pair, to_verma_pair, verma_act, DoubleCtx, Side, VermaTensor};
