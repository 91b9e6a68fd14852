//! Reduced-model bipedal walking: DCM trajectory planning, online step
//! adaptation, and a closed-loop linear-inverted-pendulum simulator.
//!
//! The pipeline has three stages, mirrored by the module layout:
//!
//! 1. [`footstep`] turns a path into nominal footsteps via a unicycle
//!    approximation, and [`dcm_plan`] turns footsteps into a piecewise
//!    DCM reference (exponential single-support segments joined by cubic
//!    double-support smoothing).
//! 2. [`adapter`] re-decides the next footstep position, step timing, and
//!    DCM offset every control cycle by solving a small QP built on the
//!    exponential ZMP interpolation of [`zmp_interp`], with [`qp`] as the
//!    solver.
//! 3. [`sim`] closes the loop on the reduced model: the [`controller`]
//!    converts DCM references into VRP commands, scripted pushes disturb
//!    the plant, and the log records everything needed for analysis.

pub mod adapter;
pub mod controller;
pub mod dcm_plan;
pub mod footstep;
pub mod geometry;
pub mod lip;
pub mod qp;
pub mod scenario;
pub mod sim;
pub mod zmp_interp;

pub use adapter::{AdapterBounds, AdapterNominal, AdapterSolution, AdapterWeights};
pub use controller::ControllerGains;
pub use dcm_plan::{DcmPlan, DsSegment, SsSegment};
pub use footstep::{Footstep, PathSpec, Side, UnicycleParams};
pub use geometry::PlanarVec;
pub use lip::{DcmState, LipParams};
pub use qp::{QpProblem, QpSolution, QpStatus};
pub use scenario::ScenarioConfig;
pub use sim::{PushEvent, SimLog, SimState, SwingProfile};
pub use zmp_interp::ExpZmpSegment;
