import csv

TRAINING_LOG_HEADER = ["episode", "total_reward", "theta_norm"]

def save_training_log(per_episode_rewards, theta_norms, fpath: str):
    with open(fpath, mode="w", encoding="utf8", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(TRAINING_LOG_HEADER)
        for n, (total, norm) in enumerate(zip(per_episode_rewards, theta_norms)):
            writer.writerow([n, int(total), repr(float(norm))])
