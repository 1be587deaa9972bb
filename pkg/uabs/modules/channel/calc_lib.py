import numpy as np

from . import ChannelParams, RewardParams, LinkMode, LinkState, PathLossDomainError

def elevation_angle(uabs_pos, altitude: float, gue_pos) -> np.ndarray | float:
    # degrees; 90 when the GUE is right below the UABS
    rel = np.asarray(gue_pos, dtype=float) - np.asarray(uabs_pos, dtype=float)
    horizontal = np.hypot(rel[..., 0], rel[..., 1])
    return np.degrees(np.arctan2(altitude, horizontal))

def p_los(theta_deg, p: ChannelParams):
    return 1 / (1 + p.alpha*np.exp(-p.beta*(np.asarray(theta_deg)-p.alpha)))

def path_loss(fc_mhz: float, d_m, eta_db):
    d_m = np.asarray(d_m, dtype=float)
    if np.any(d_m<=0):
        raise PathLossDomainError(f"Path loss needs a positive distance, got {d_m}")
    return 20*np.log10(fc_mhz) + 20*np.log10(d_m) - 27.55 + eta_db

def snr(p: ChannelParams, L_db):
    return (p.ptx_dbm + p.gtx_db + p.grx_db - L_db) - p.pnoise_dbm

def link_state(rng: np.random.Generator, p_los_value, mode: LinkMode, p: ChannelParams) -> LinkState:
    p_los_value = np.asarray(p_los_value, dtype=float)
    if mode==LinkMode.Sampled:
        los = rng.random(p_los_value.shape) < p_los_value
        return LinkState(los, np.where(los, p.eta_los_db, p.eta_nlos_db))
    else:
        return LinkState(None, p_los_value*p.eta_los_db + (1-p_los_value)*p.eta_nlos_db)

def covered(snr_db, snr_th_db):
    return snr_db >= snr_th_db

def coverage_mask(uabs_pos, altitude: float, gue_pos: np.ndarray, p: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Coverage of every GUE row in `gue_pos` (inactive rows included).

    Link draws are taken for all rows so the random stream consumption does
    not depend on which GUEs happen to be active.
    """
    theta = elevation_angle(uabs_pos, altitude, gue_pos)
    rel = gue_pos - uabs_pos
    d = np.sqrt(rel[:, 0]**2 + rel[:, 1]**2 + altitude**2) # 3-D slant distance
    link = link_state(rng, p_los(theta, p), p.mode, p)
    return covered(snr(p, path_loss(p.fc_mhz, d, link.eta_db)), p.threshold_db)

def collect_reward(eligible, rew: RewardParams, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    eligible = np.asarray(eligible, dtype=int)
    if len(eligible)<=rew.c_max:
        return len(eligible), eligible
    served = np.sort(rng.permutation(eligible)[:rew.c_max])
    return rew.c_max, served
