//! Formal solutions of quasi-linear turning-point equations.

pub mod assemble;
pub mod closed_form;
pub mod inner;
pub mod outer;
pub mod ring;
pub mod spec;

pub use assemble::{combined_from_matching, dac_feasibility, Feasibility, Violation};
pub use closed_form::{control_expansion, example1_closed_form, ControlSeries, Variant};
pub use inner::{inner_expansion, InnerExpansion, InnerOptions};
pub use outer::{outer_expansion, OuterExpansion};
pub use spec::{OdeSpec, Term};
