"""Nearest-neighbor voting on parameter vectors.

Two clouds of (mu, sigma, nu) vectors, one with a much larger scale.
Without scaling the sigma axis dominates the distance; zscore scaling
puts the three axes on equal footing.
"""
import numpy as np

from swdknn import KnnConfig, LabeledDataset, classify, classify_batch, fit_scaling

rng = np.random.default_rng(7)
quiet = np.column_stack([rng.normal(0, 2, 50), rng.normal(20, 3, 50), rng.normal(4, 1, 50)])
spiky = np.column_stack([rng.normal(0, 2, 50), rng.normal(120, 15, 50), rng.normal(8, 3, 50)])
train = LabeledDataset(np.vstack([spiky, quiet]), [1] * 50 + [0] * 50)

query = [0.5, 60.0, 5.0]
p = classify(query, train, KnnConfig(k=5))
print("query", query, "-> label", p.label)
print("  neighbors", p.neighbor_indices)
print("  distances", np.round(p.neighbor_distances, 3))

scaling = fit_scaling(train.features, "zscore")
print("\nzscore means", np.round(scaling.means, 2), "stds", np.round(scaling.stds, 2))
queries = rng.normal([0, 70, 6], [2, 40, 2], size=(10, 3))
plain = [q.label for q in classify_batch(queries, train, KnnConfig(k=5))]
scaled = [q.label for q in classify_batch(queries, train, KnnConfig(k=5, scaling=scaling))]
print("labels without scaling:", plain)
print("labels with zscore:    ", scaled)
