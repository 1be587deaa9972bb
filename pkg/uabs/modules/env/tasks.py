import numpy as np

from . import AreaSpec, WaypointPath, GueSpec, TrafficPattern, TaskConfig

TOY_SIDE = 40.0
TOY_HORIZON = 60
TOY_START_TIMES = (1, 2, 3)

def make_toy_tasks(altitude: float=10.0, uabs_speed: float=1.0, gue_speed: float=1.0, p_msg: float=1.0, horizon: int=TOY_HORIZON) -> tuple[TaskConfig, TaskConfig]:
    """Two tasks that differ only in the direction GUEs run the perimeter.

    Three GUEs leave the bottom-right corner one step apart; the UABS starts
    at the middle of the bottom edge.
    """
    s = TOY_SIDE
    area = AreaSpec(s, s, altitude)
    cw = [(s, 0), (0, 0), (0, s), (s, s), (s, 0)]
    ccw = cw[::-1]

    def toy_task(name: str, corners: list) -> TaskConfig:
        path = WaypointPath(corners, area)
        traffic = TrafficPattern(
            gues=[GueSpec(path, gue_speed, t_g) for t_g in TOY_START_TIMES],
            p_msg=p_msg,
        )
        return TaskConfig(name=name, uabs_start=(s/2, 0), traffic=traffic, horizon=horizon, area=area, uabs_speed=uabs_speed)

    return toy_task("toy-cw", cw), toy_task("toy-ccw", ccw)

def gen_random_task(area: AreaSpec, g_range: tuple[int, int], speed: float, T: int, rng: np.random.Generator,
                    speed_jitter: float=0.0, p_msg: float=1.0, uabs_speed: float=20.0, name: str=None) -> TaskConfig:
    g_min, g_max = g_range
    G = int(rng.integers(g_min, g_max+1))
    size = area.size

    gues = []
    for g in range(G):
        n_points = int(rng.integers(3, 9))
        points = [rng.uniform(0, size)]
        while len(points)<n_points:
            p = rng.uniform(0, size)
            if np.any(p!=points[-1]):
                points.append(p)
        v = speed * rng.uniform(1-speed_jitter, 1+speed_jitter) if speed_jitter>0 else speed
        t_g = int(rng.integers(1, max(T//2, 1)+1))
        gues.append(GueSpec(WaypointPath(points, area), v, t_g))

    return TaskConfig(
        name=name, uabs_start=rng.uniform(0, size),
        traffic=TrafficPattern(gues=gues, p_msg=p_msg), horizon=T, area=area, uabs_speed=uabs_speed,
    )
