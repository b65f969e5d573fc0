"""Quasi-periodic signal: a torus hidden in a one-dimensional time series.

cos(w t) + cos(sqrt(2) w t) never repeats, but its delay embedding fills a
2-torus, so persistence reports two long degree-1 bars.
"""
import numpy as np

from toroidal import datasets, pipeline

t = np.arange(1500)
w = 2 * np.pi / 25
signal = np.cos(w * t) + np.cos(np.sqrt(2) * w * t)
sw = datasets.sliding_window(datasets.TimeSeries(signal[:, None]), d=5, tau=4)
print("window cloud:", sw.cloud.points.shape)
res = pipeline.persist(sw.cloud, 300)
print("persistences:", np.round(np.sort(pipeline.truncated_persistence(res.barcode))[::-1][:5], 3))
print("dominant classes:", pipeline.dominant_count(res.barcode))

cr = pipeline.coordinates(res, [0, 1])
print("M =", cr.torus_map.M, "off-diagonal ratio", round(cr.D_stc.off_diagonal_ratio, 4))
