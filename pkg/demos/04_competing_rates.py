"""
What else can happen to the exciton
===================================

Phonon scattering, carrier capture and annihilation all compete with
the search. Ranking the timescales shows which one wins.
"""

from excitonsearch.config import load_preset
from excitonsearch.rates import compete_report

cfg = load_preset("naphthalene")
rep = compete_report(cfg.problem(), cfg.carriers, cfg.temperature, B=cfg.scatter_B,
                     shift_B=cfg.shift_B, shift_dp=cfg.shift_dp, v_carrier=cfg.carrier_velocity,
                     A_prime=cfg.A_prime)

for name in rep.ranking:
    print(f"{name:>7}: {getattr(rep, name).si:.3e} s")
print(f"band shift {rep.band_shift}, coherence length {rep.coherence_length.si:.2e} m")
print("size limit satisfied:", rep.feasible, f"(N^2 = {rep.condition_lhs:.0f}, bound {rep.condition_rhs:.2f})")
for note in rep.notes:
    print("-", note)
