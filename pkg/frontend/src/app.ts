// DOM layer: renders the controller state and forwards clicks. The only
// thing kept client-side is the volunteer id (localStorage); everything
// else is re-fetched from the server so a reload resumes exactly where the
// server says.

import { ApiClient } from "./api.js";
import { Controller, UiState } from "./state.js";
import { Sidebar } from "./sidebar.js";

const SCREENS = [
  "login",
  "intro_stats",
  "mode_select",
  "session",
  "break",
  "complete",
  "error",
] as const;

const VOLUNTEER_KEY = "osdg.volunteer_id";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function initApp(baseUrl: string): Controller {
  const client = new ApiClient(baseUrl);
  const controller = new Controller(client);

  const sidebar = new Sidebar(
    el("sidebar"),
    el("sidebar-goals"),
    el<HTMLInputElement>("sidebar-search"),
    el<HTMLButtonElement>("btn-sidebar-toggle"),
  );
  client
    .sdgTargets()
    .then((doc) => sidebar.load(doc))
    .catch(() => {
      el("sidebar-goals").textContent = "targets unavailable";
    });

  function render(state: UiState): void {
    for (const name of SCREENS) {
      el(`screen-${name}`).style.display = state.screen === name ? "block" : "none";
    }
    if (state.screen === "session" || state.screen === "break") {
      const session = state.session!;
      el("session-kind").textContent =
        session.kind === "intro" ? "Introductory exercise" : `Session (${session.mode})`;
      el("task-text").textContent = state.task?.text ?? "";
      el("candidate-sdg").textContent = state.task ? `SDG ${state.task.candidate_sdg}` : "";
      el("progress").textContent = `${state.position} / ${state.total}`;
      const fraction = state.total ? (state.position - 1) / state.total : 0;
      el("progress-bar-fill").style.width = `${Math.round(fraction * 100)}%`;
      el("tally").textContent = `accepted ${state.myAccepts} / rejected ${state.myRejects}`;
      el("notice").textContent = state.notice ?? "";
      const disabled = state.voteInFlight || state.breakPending;
      el<HTMLButtonElement>("btn-accept").disabled = disabled;
      el<HTMLButtonElement>("btn-reject").disabled = disabled;
    }
    if (state.screen === "break") {
      el("break-position").textContent = String(state.position - 1);
    }
    if (state.screen === "intro_stats" && state.introStats) {
      const rows = el("stats-rows");
      rows.textContent = "";
      for (const stat of state.introStats) {
        const tr = document.createElement("tr");
        const mine = document.createElement("td");
        mine.textContent = stat.my_decision;
        const community = document.createElement("td");
        community.textContent = `${Math.round(stat.community_accept_fraction * 100)}% accepted`;
        const id = document.createElement("td");
        id.textContent = stat.task_id;
        tr.append(id, mine, community);
        rows.appendChild(tr);
      }
    }
    if (state.screen === "error") {
      el("error-message").textContent = state.error ?? "unknown error";
    }
  }

  controller.subscribe(render);

  // login
  const volunteerInput = el<HTMLInputElement>("volunteer-id");
  const saved = localStorage.getItem(VOLUNTEER_KEY);
  if (saved) volunteerInput.value = saved;
  el("btn-start").addEventListener("click", () => {
    const volunteerId = volunteerInput.value.trim();
    if (!volunteerId) return;
    localStorage.setItem(VOLUNTEER_KEY, volunteerId);
    void controller.start(volunteerId);
  });

  // session
  el("btn-accept").addEventListener("click", () => void controller.vote("accept"));
  el("btn-reject").addEventListener("click", () => void controller.vote("reject"));
  el("btn-continue").addEventListener("click", () => controller.continueFromBreak());

  // intro stats -> mode selection
  el("btn-to-modes").addEventListener("click", () => controller.continueToModeSelect());

  // mode selection
  el("btn-mixed").addEventListener("click", () => void controller.startStandard("mixed"));
  el("btn-sdg").addEventListener("click", () => {
    const sdg = Number(el<HTMLSelectElement>("sdg-select").value);
    void controller.startStandard({ sdg });
  });

  // completion -> offer another session
  el("btn-again").addEventListener("click", () => controller.continueToModeSelect());

  if (saved) {
    void controller.start(saved);
  }
  return controller;
}

declare global {
  interface Window {
    OSDG_API_BASE?: string;
    osdgController?: Controller;
  }
}

if (typeof document !== "undefined" && document.getElementById("screen-login")) {
  const base = window.OSDG_API_BASE ?? "http://127.0.0.1:8765";
  window.osdgController = initApp(base);
}
