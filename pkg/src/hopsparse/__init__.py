"""Hopset hierarchies to missing spanners, preservers and spanners, with brute-force verifiers."""
from .graph import (GENERATOR_KINDS, GeneratorSpec, Graph, GraphError, PairSet, ParseError,
                    generate_graph, load_graph, parse_graph, save_graph, transitive_closure)
from .hopsets import (BASE_TCW, EXACT, REACH, ApproxMode, BaseAlgorithm, Hopset, base_tcw,
                      folklore_exact_hopset, level_hopset, multiplicative, shortcut_folklore,
                      sublinear_from_superlinear, undirected_sublinear_hopset)
from .missing import ConstructionError, MissingSpanner, WitnessPath, hopsets_to_missing_spanner, witness_path
from .paths import apsp_exact, apsp_hop_bounded, complete_distance_graph, greedy_spanner, min_hops
from .schedule import (BetaSchedule, custom_schedule, schedule_directed, schedule_undirected,
                       telescoping_residuals)
from .derived import (DensityNet, SubgraphResult, density_net, directed_preserver_pipeline,
                      emulator_from_hopset, nearest_source_tree, partition_sources,
                      preserver_from_missing, reachability_preserver_pipeline, slack_spanner,
                      sourcewise_spanner, sourcewise_spanner_partitioned, spanner_from_emulator,
                      undirected_preserver_pipeline, weighted_near_additive_spanner)
from .verify import (AllPairs, Pairs, Slack, Sourcewise, VerificationReport, check_density_net,
                     check_hopset, check_missing_spanner, check_shortcut, check_stretch)

__version__ = "0.1.0"
