"""Resolvent-problem machinery: transformations of polynomial equations,
monodromy of parameter families, and parameter-count lower bounds."""
from ._kernels import BACKEND
from .errors import DomainError, GroupTooLarge, NearCriticalPath, RootFindingError
from .forms import (
    FormPhi,
    Stratum,
    build_phi,
    coincidence_subspace_basis,
    parameter_lower_bound,
    phi_eval,
    phi_invariant_under,
    phi_vanishes_on,
    realize_stratum,
    restrict_phi,
    stratify_point,
)
from .monodromy import (
    Loop,
    ParamFamily,
    TrackOptions,
    general_family,
    inertia_group,
    instantiate,
    monodromy_group,
    petal_loops,
    power_family,
    track_loop,
    verify_monodromy_theorem,
)
from .perm import (
    PermGroup,
    Permutation,
    SetPartition,
    chebotarev_bound,
    closure,
    coincidence_partition,
    cycle_count,
    height_lt,
    is_transitive,
    max_chain,
    parity,
)
from .poly import Polynomial, RootSet, discriminant, find_roots, resultant
from .transform import (
    TschirnhausMap,
    bring_jerrard,
    klein_family,
    one_param_normalize,
    recover_root,
    tschirnhaus,
)

__version__ = "0.1.0"
