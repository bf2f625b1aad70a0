"""Recurrent deep Q-learning for nitrogen fertilization and irrigation
management in a partially observable crop environment.

Subpackages:
    nn       -- minimal dense/GRU neural-network kernel with hand-written
                backward passes, Adam, and finite-difference gradient checks
    weather  -- Markov-chain / gamma stochastic weather generator with
                climate-perturbation scenarios and CSV I/O
    emission -- daily soil N2O flux models (deterministic and log-normal
                probabilistic) plus a synthetic-data generator
    env      -- surrogate crop/soil simulation behind a small POMDP-style
                step/reset interface
    agent    -- recurrent DQN: replay memory, epsilon-greedy training loop,
                policy evaluation
    harness  -- experiment orchestration, sweep statistics, reports, CLI
"""

__version__ = "0.1.0"
