"""Antoine-type defining sequences for wild Cantor sets and their homogeneity groups."""

from .autgroup import (ChainSymmetry, FgAbelianGroup, GroupDescriptor, NamedGenerator, SymmetrySet,
                       canonical_invariants, chain_automorphisms, group_isomorphic, homogeneity_group,
                       tower_automorphisms)
from .constructions import (GroupSpec, RigidAllocator, build_group, build_z, build_zm, parse_group_spec,
                            uniform_tower)
from .equivalence import Inequivalent, MatchCertificate, is_unsplittable, sher_equivalent
from .errors import (AddressError, AntoineError, DomainError, HypothesisError, NestingError, ParseError, PathError,
                     SerializationError, ShapeError, TruncationError)
from .genus import GenusReport, genus_spectrum, local_genus
from .index import IndexDecl, antoine_stage_index, check_evenness, compose_index, mark_parallel
from .model import (ChainNode, ChainShape, DefiningSequence, InRigidLeaf, PinchPoint, PointAddress, RigidClass,
                    RigidLeaf, Truncation, TruncationFrontier, canonical_serialize, deserialize, navigate, validate)

__version__ = "0.1.0"
