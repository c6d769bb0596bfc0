//! Implicit geometry, the finite cell indicator and quadtree integration.

mod dnbd;
mod quadtree;
mod shape;

pub use dnbd::{DnbdGeometry, Notch};
pub use quadtree::{
    measure_physical_area, partition_element, CellClass, CellPoint, IntegrationCell,
};
pub use shape::{indicator, segment_distance, Aabb, ImplicitShape, Point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid DNBD geometry: {0}")]
    InvalidDnbd(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
}
