/**
 * Polling dashboard state. One in-flight poll at a time (a tick that
 * lands while the previous one is still running is skipped); a failed
 * poll flags the data stale but never clears what was already gathered.
 * A convergence point is appended whenever the finished count grows.
 */

import { CoordinatorClient, LoopPoint, MetricStat, Progress } from "./client.js";

export interface ConvergencePoint {
  finished: number;
  ebMean: number;
  ebStderr: number;
}

export interface DashboardState {
  progress: Progress;
  metrics: MetricStat[] | null; // null until the first run finishes
  loop: LoopPoint[];
  convergence: ConvergencePoint[];
  stale: boolean;
}

export function emptyDashboard(): DashboardState {
  return {
    progress: { created: 0, finished: 0, running: 0 },
    metrics: null,
    loop: [],
    convergence: [],
    stale: false,
  };
}

export class Poller {
  state: DashboardState = emptyDashboard();
  private inFlight = false;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly client: CoordinatorClient,
    private readonly onUpdate: (state: DashboardState) => void = () => {},
  ) {}

  /** Forget batch-local history (call when a new batch starts). */
  reset(): void {
    this.state = emptyDashboard();
    this.onUpdate(this.state);
  }

  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const progress = await this.client.progress();
      const stats = await this.client.resSum();
      const metrics = stats.length > 0 ? stats : null;
      let loop = this.state.loop;
      if (progress.finished >= 1) {
        loop = await this.client.loopMean();
      }
      const convergence = this.state.convergence.slice();
      if (
        progress.finished > this.state.progress.finished &&
        metrics !== null
      ) {
        convergence.push({
          finished: progress.finished,
          ebMean: metrics[0].mean,
          ebStderr: metrics[0].stderr,
        });
      }
      this.state = { progress, metrics, loop, convergence, stale: false };
    } catch {
      this.state = { ...this.state, stale: true };
    } finally {
      this.inFlight = false;
      this.onUpdate(this.state);
    }
  }

  start(intervalMs: number): void {
    this.stop();
    void this.tick();
    this.timer = setInterval(() => void this.tick(), intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
