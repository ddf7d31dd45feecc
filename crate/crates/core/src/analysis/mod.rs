//! Generic analysis over any [`OrliczModel`].

mod conjugate;
mod dilation;
mod indices;
mod model;
mod norm;

pub use conjugate::{conjugate_eval, nabla3_probe, ConjugateValue, Nabla3Report, Nabla3Row, Nabla3Verdict};
pub use dilation::{
    dilation_at_scale, equivalence_at_zero_probe, sample_dilations, sample_dilations_at_scales,
    EquivalenceReport, EquivalenceRow, EquivalenceVerdict, LimitCandidate,
};
pub use indices::{estimate_indices, IndexEstimate, IndexVerdict, STABILITY_GROWTH};
pub use model::{ConjugateModel, OrliczModel, PowerModel, TabulatedModel, XLogModel};
pub use norm::{luxemburg_norm, modular, StepFunction};
