//! Higher operads over n-trees: trees, tree morphisms, chains, quotients,
//! polytopes, cube realizations and nerves.

pub mod category;
pub mod cubes;
pub mod error;
pub mod hoperad;
pub mod nerve;
pub mod omega;
pub mod polytopes;
pub mod quotient;
pub mod trees;

pub use category::{Arrow, CategoryJson, FinCategory};
pub use cubes::{apply_permutation, endpoints, realize, Cube, CubeConfig, CubeJson};
pub use error::{Error, ErrorKind, Result};
pub use hoperad::{
    chain_category, enumerate_chains, free_operad_elements, substitute, ChainCategory, ChainObject,
    ChainOptions, Collection, FreeElement,
};
pub use nerve::{has_terminal, nerve_profile, NerveProfile};
pub use omega::{from_pasting, hom_set, prune, prune_morphism, PastingDiagram, TreeMorphism};
pub use polytopes::{associahedron, braid_polytope, permutohedron, tonks_projection, Poset};
pub use quotient::{
    collapse, collapse_general, relation_generators, Quotient, RelationKind, RelationOptions,
};
pub use trees::{enumerate_trees, enumerate_trees_bounded, Leaf, Tree, TreeJson};
