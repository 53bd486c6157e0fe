//! The category Γ of finite pointed sets and truncated Γ-modules.

pub mod maps;
pub mod module;
pub mod ops;

pub use maps::{compose_maps, enumerate_maps, partitions_of, partitions_up_to, young_generators, Partition, PointedMap};
pub use module::{ActionRule, GammaModule, NatTransform, OrbitTable, SparseColumn};
pub use ops::{
    check_functoriality, corestrict, gamma_lambda, hom_space, inclusion_of, is_y_epi, is_y_epi_in, kernel_module,
    module_coinvariants, module_invariants, pi0, pi0_relation_map, pointwise_tensor, realize_orbit_sum,
    representable, FunctorialityCheck, HomSpace, PartitionFamily, Trials, YEpiCheck,
};
