//! Control-flow and program-dependence graphs of function units.

mod cfg;
mod defuse;
mod dump;
mod pdg;

pub use cfg::{
    build_cfg, handler_catches, handler_names, last_segment, raised_name, Cfg, CfgNode, CfgNodeKind, EdgeKind, NodeId,
    ENTRY, EXIT,
};
pub use defuse::{BindingKind, Def, Use};
pub use dump::dump_pdg;
pub use pdg::{build_pdg, DataEdge, DefSite, Pdg};
