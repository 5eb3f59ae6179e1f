//! An embedded concept-oriented database engine with the COQL query language.

pub mod algebra;
pub mod coql;
pub mod cube;
pub mod inference;
pub mod schema;
pub mod session;
pub mod store;
pub mod value;

pub use schema::{Concept, Dimension, Direction, Domain, Schema, SchemaError, Section};
pub use store::{Collection, Database, Element, ElementSet, StoreError};
pub use value::{ComplexIdentity, PrimitiveType, Segment, Value};

pub use algebra::{eval_query, Evaluator, QueryError, Scope, Val};
pub use cube::{olap_run, CubeResult, Level, Measure, OlapSpec};
pub use session::{OutputFormat, ScriptReport, Session, SessionError};
