#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod consistency;
pub mod element;
pub mod error;
pub mod field;
pub mod group;
pub mod params;
pub mod structure;
pub mod subgroup;
pub mod transfer;

pub use classify::FamilyLabel;
pub use element::Element;
pub use error::{
    ClassifyError, GroupError, LabelError, ParamError, StructureError, TableError, TransferError,
};
pub use group::PcGroup;
pub use params::{PresentationParams, RawParams};
pub use subgroup::Subgroup;
