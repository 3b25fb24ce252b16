"""repcap: information-theoretic limits on how much an embedding can carry.

Finite-alphabet entropy and divergence, typical sets, channel capacity and
rate-distortion by Blahut-Arimoto, the typical-set and random-coding
constructions as runnable codecs, Monte Carlo reproductions of the resulting
phase transitions, and class-collapse diagnostics for embedding dumps.
"""
__version__ = "0.1.0"

from .errors import (AbsoluteContinuityViolated, DegenerateMeans, DimensionMismatch, EmptyClass,
                     EnumerationTooLarge, InsufficientRate, InvalidDistribution, InvalidInputs, InvalidParams,
                     MissingTargets, NotConverged, NotErgodic, RepcapError)
from .probability import (Alphabet, JointPmf, Pmf, binary_entropy, conditional_entropy, entropy, entropy_of,
                          joint_entropy, kl_divergence, mutual_information, read_joint_csv, read_matrix_csv,
                          read_pmf_csv, write_joint_csv, write_matrix_csv, write_pmf_csv)
from .sources import (IidSource, MarkovSource, SequenceSample, empirical_entropy_rate, entropy_rate,
                      read_source_csv, sample, sample_many, source_from_spec, stationary_distribution, stream)
from .typicality import (JointTypicalityContext, TypicalSet, conditional_typical_set, count_jointly_typical_pairs,
                         enumerate_typical_set, is_jointly_typical, is_typical)
from .channels import (CapacityResult, DiscreteChannel, blahut_arimoto_capacity, bsc, build_example_channels,
                       channel_mutual_information, identity_channel, modular_additive, quantized_awgn,
                       read_channel_csv, transmit)
from .rate_distortion import (DistortionMeasure, RdPoint, blahut_arimoto_rd, distortion_limits, rate_at_distortion,
                              rd_curve, read_distortion_csv)
from .embedding import (EmbeddingCode, EmbeddingSpace, RandomCodebook, build_typical_codebook, covering_mass,
                        effective_support_audit, feasibility_report, joint_typicality_decode, random_codebook,
                        representation_rate)
from .simulations import (ExperimentConfig, ExperimentReport, LossBoundResult, noisy_input_loss_bound,
                          run_theorem3, run_theorem4, run_theorem5, run_theorem6, run_theorem7, simulate,
                          simulate_lossless_embedding, simulate_lossy_embedding, simulate_noisy_embedding,
                          simulate_source_channel)
from .collapse import (LabeledEmbeddings, class_statistics, collapse_index, collapse_report, etf_residuals,
                       read_embeddings_csv, regression_degeneracy_check, simplex_etf)
