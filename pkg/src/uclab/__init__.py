"""Library and CLI for checking and searching union-closed family conjectures.

Core pieces:

* :mod:`uclab.families` - bitmask set-family algebra (closure, restrictions,
  frequencies, separation, join);
* :mod:`uclab.conjectures` - verdict-producing decision procedures;
* :mod:`uclab.witness` - constructive witness chains with replayable
  certificates, plus the sub-multiset solver;
* :mod:`uclab.partition` - greedy max-frequency partitions and the
  size-sequence predicates;
* :mod:`uclab.enumeration` - exhaustive and random family generation with
  canonical forms;
* :mod:`uclab.cli` - the ``uclab`` command.
"""

__version__ = "0.1.0"

from .errors import InputError, InternalConsistencyError
from .families import (
    FrequencyProfile,
    MultiFamily,
    SetFamily,
    bit,
    delete_element,
    elements_of,
    extend_with_new_element,
    fingerprint,
    frequency_profile,
    is_power_set,
    is_separating,
    is_union_closed,
    join,
    make_family,
    make_multifamily,
    mask_of,
    restrict_contains,
    restrict_disjoint,
    separating_quotient,
    union_closure,
    universe_of,
    widen_universe,
)
from .conjectures import (
    Verdict,
    check_conj21_all,
    check_conj21_at,
    check_conj41,
    check_doubleton_implication,
    check_frankl,
    check_reimer,
    mix_lower_bound,
    reimer_sum,
)
from .witness import (
    Q23Solution,
    WitnessCertificate,
    chain_length,
    construct_witness_chain,
    construct_witness_chain_with_trace,
    construct_witness_via_q23,
    solve_q23,
    verify_certificate,
    verify_chain,
)
from .partition import (
    Partition,
    build_partition,
    check_conj35_on_family,
    corollary34_violations,
    mu_bound,
    sequence_conj35_ok,
    sequence_corollary34_ok,
    sequence_frankl_ok,
    verify_block_unions,
)
from .enumeration import (
    EnumerationSpec,
    canonical_form,
    enumerate_union_closed,
    random_family,
    random_union_closed,
)
