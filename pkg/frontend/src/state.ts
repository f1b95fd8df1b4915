// Screen/state machine for the labeling flows. Server state is
// authoritative: the controller never advances the position itself, it
// re-asks the server after every acknowledged vote. The UI layer renders
// from the snapshot and calls the action methods.

import { ApiClient, ApiError, IntroStat, SessionInfo, Task } from "./api.js";

export type Screen =
  | "login"
  | "intro_stats"
  | "mode_select"
  | "session"
  | "break"
  | "complete"
  | "error";

export interface UiState {
  screen: Screen;
  volunteerId: string | null;
  session: SessionInfo | null;
  task: Task | null;
  position: number; // 1-based position of the task being shown
  total: number;
  myAccepts: number; // this session, this page load (server keeps progress)
  myRejects: number;
  breakPending: boolean;
  voteInFlight: boolean;
  introStats: IntroStat[] | null;
  notice: string | null; // transient info (e.g. a task was swapped out)
  error: string | null;
}

const CONFLICT_CODES = new Set([
  "TaskRetired",
  "VoteCapReached",
  "DuplicateVote",
  "OutOfOrderVote",
]);

export class Controller {
  state: UiState = {
    screen: "login",
    volunteerId: null,
    session: null,
    task: null,
    position: 0,
    total: 0,
    myAccepts: 0,
    myRejects: 0,
    breakPending: false,
    voteInFlight: false,
    introStats: null,
    notice: null,
    error: null,
  };

  private listeners: Array<(state: UiState) => void> = [];
  private acknowledgedBreaks = new Set<number>();

  constructor(private readonly client: ApiClient) {}

  subscribe(listener: (state: UiState) => void): void {
    this.listeners.push(listener);
  }

  private emit(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private fail(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.emit({ screen: "error", error: message, voteInFlight: false });
  }

  /** Entry point: resume whatever the server says is open. */
  async start(volunteerId: string): Promise<void> {
    try {
      this.emit({ volunteerId, error: null, notice: null });
      const status = await this.client.volunteerStatus(volunteerId);
      if (status.open_session) {
        await this.resume(status.open_session);
      } else if (!status.onboarded) {
        await this.startIntro();
      } else {
        this.emit({ screen: "mode_select" });
      }
    } catch (err) {
      this.fail(err);
    }
  }

  private async resume(session: SessionInfo): Promise<void> {
    this.emit({ session, myAccepts: 0, myRejects: 0 });
    this.acknowledgedBreaks = new Set();
    await this.loadNext();
  }

  async startIntro(): Promise<void> {
    try {
      const session = await this.client.createSession(this.state.volunteerId!, "intro");
      await this.resume(session);
    } catch (err) {
      this.fail(err);
    }
  }

  async startStandard(mode: "mixed" | { sdg: number }): Promise<void> {
    try {
      const session = await this.client.createSession(this.state.volunteerId!, mode);
      await this.resume(session);
    } catch (err) {
      if (err instanceof ApiError && err.code === "OpenSessionExists") {
        const sessionId = err.body.session_id;
        if (typeof sessionId === "string") {
          await this.resumeById(sessionId);
          return;
        }
      }
      this.fail(err);
    }
  }

  private async resumeById(sessionId: string): Promise<void> {
    try {
      await this.resume(await this.client.getSession(sessionId));
    } catch (err) {
      this.fail(err);
    }
  }

  private async loadNext(): Promise<void> {
    const session = this.state.session!;
    const next = await this.client.nextTask(session.session_id);
    if (next.complete) {
      if (session.kind === "intro") {
        const stats = await this.client.introStats(this.state.volunteerId!);
        this.emit({ screen: "intro_stats", introStats: stats.tasks, task: null });
      } else {
        this.emit({ screen: "complete", task: null });
      }
      return;
    }
    const position = next.position!;
    const breakPending = Boolean(next.is_stop_point) && !this.acknowledgedBreaks.has(position);
    this.emit({
      task: next.task!,
      position,
      total: next.total!,
      breakPending,
      screen: breakPending ? "break" : "session",
    });
  }

  /** Break screens need an explicit continue click. */
  continueFromBreak(): void {
    if (!this.state.breakPending) return;
    this.acknowledgedBreaks.add(this.state.position);
    this.emit({ breakPending: false, screen: "session" });
  }

  /** After reviewing intro stats, move on to mode selection. */
  continueToModeSelect(): void {
    this.emit({ screen: "mode_select", introStats: null, session: null });
  }

  async vote(decision: "accept" | "reject"): Promise<void> {
    const { task, session, voteInFlight, breakPending } = this.state;
    if (!task || !session || voteInFlight || breakPending) return;
    this.emit({ voteInFlight: true, notice: null });
    try {
      await this.client.vote(session.session_id, task.task_id, decision);
      this.emit({
        voteInFlight: false,
        myAccepts: this.state.myAccepts + (decision === "accept" ? 1 : 0),
        myRejects: this.state.myRejects + (decision === "reject" ? 1 : 0),
      });
      await this.loadNext();
    } catch (err) {
      if (err instanceof ApiError && CONFLICT_CODES.has(err.code)) {
        // task was retired or already voted: the tally stays, the server
        // swapped in a substitute; just re-ask what to show
        this.emit({ voteInFlight: false, notice: `Task replaced (${err.code}).` });
        try {
          await this.loadNext();
        } catch (inner) {
          this.fail(inner);
        }
        return;
      }
      this.fail(err);
    }
  }
}
