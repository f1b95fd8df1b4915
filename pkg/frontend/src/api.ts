// Typed client for the labeling service. The UI only ever talks to the
// endpoints listed in ENDPOINTS; the contract test checks that list against
// the service's OpenAPI description.

export interface Task {
  task_id: string;
  text: string;
  candidate_sdg: number;
}

export interface SessionInfo {
  session_id: string;
  volunteer_id: string;
  kind: "intro" | "standard";
  mode: string;
  size: number;
  cursor: number;
  complete: boolean;
}

export interface NextTaskState {
  complete: boolean;
  task?: Task;
  position?: number;
  total?: number;
  is_stop_point?: boolean;
  session?: SessionInfo;
}

export interface VoteResult {
  accepted: boolean;
  accepts?: number;
  rejects?: number;
  position: number;
  complete: boolean;
}

export interface IntroStat {
  task_id: string;
  my_decision: "accept" | "reject";
  community_accept_fraction: number;
}

export interface VolunteerStatus {
  volunteer_id: string;
  onboarded: boolean;
  open_session: SessionInfo | null;
}

export interface SdgTarget {
  code: string;
  description: string;
  indicators: string[];
}

export interface SdgGoal {
  goal: number;
  short_name: string;
  title: string;
  targets: SdgTarget[];
}

export interface SdgTargetsDoc {
  goals: SdgGoal[];
  total_targets: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly body: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

export type SessionMode = "intro" | "mixed" | { sdg: number };

// method + path template for every request the client can issue
export const ENDPOINTS = [
  "POST /api/v1/sessions",
  "GET /api/v1/sessions/{session_id}",
  "GET /api/v1/sessions/{session_id}/next",
  "POST /api/v1/sessions/{session_id}/votes",
  "GET /api/v1/volunteers/{volunteer_id}/intro-stats",
  "GET /api/v1/volunteers/{volunteer_id}/status",
  "GET /api/v1/sdg-targets",
] as const;

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    let parsed: Record<string, unknown> = {};
    try {
      parsed = text ? JSON.parse(text) : {};
    } catch {
      throw new ApiError(response.status, "BadResponse", `non-JSON response from ${path}`);
    }
    if (!response.ok) {
      const code = typeof parsed.code === "string" ? parsed.code : `HTTP${response.status}`;
      const message = typeof parsed.message === "string" ? parsed.message : `${method} ${path} failed`;
      throw new ApiError(response.status, code, message, parsed);
    }
    return parsed as T;
  }

  createSession(volunteerId: string, mode: SessionMode, seed?: number): Promise<SessionInfo> {
    const body: Record<string, unknown> = { volunteer_id: volunteerId };
    if (mode === "intro" || mode === "mixed") {
      body.mode = mode;
    } else {
      body.mode = "sdg";
      body.sdg = mode.sdg;
    }
    if (seed !== undefined) body.seed = seed;
    return this.request<SessionInfo>("POST", "/api/v1/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.request<SessionInfo>("GET", `/api/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  nextTask(sessionId: string): Promise<NextTaskState> {
    return this.request<NextTaskState>(
      "GET",
      `/api/v1/sessions/${encodeURIComponent(sessionId)}/next`,
    );
  }

  vote(sessionId: string, taskId: string, decision: "accept" | "reject"): Promise<VoteResult> {
    return this.request<VoteResult>(
      "POST",
      `/api/v1/sessions/${encodeURIComponent(sessionId)}/votes`,
      { task_id: taskId, decision },
    );
  }

  introStats(volunteerId: string): Promise<{ volunteer_id: string; tasks: IntroStat[] }> {
    return this.request("GET", `/api/v1/volunteers/${encodeURIComponent(volunteerId)}/intro-stats`);
  }

  volunteerStatus(volunteerId: string): Promise<VolunteerStatus> {
    return this.request("GET", `/api/v1/volunteers/${encodeURIComponent(volunteerId)}/status`);
  }

  sdgTargets(): Promise<SdgTargetsDoc> {
    return this.request("GET", "/api/v1/sdg-targets");
  }
}
