// Transient warning toasts and the session-expired dialog.

export class Toaster {
  private host: HTMLElement;

  constructor(parent: HTMLElement) {
    this.host = document.createElement("div");
    this.host.className = "toasts";
    parent.appendChild(this.host);
  }

  show(message: string, kind: "info" | "warning" | "error" = "warning"): void {
    const toast = document.createElement("div");
    toast.className = `toast ${kind}`;
    toast.textContent = message;
    this.host.appendChild(toast);
    setTimeout(() => toast.remove(), 6000);
  }

  showAll(messages: string[]): void {
    for (const message of messages) this.show(message);
  }
}

/** Modal offering to restart after the server reports 410 Gone. */
export function sessionExpiredDialog(parent: HTMLElement, onRestart: () => void): void {
  if (parent.querySelector(".expired-dialog")) return;
  const overlay = document.createElement("div");
  overlay.className = "expired-dialog";
  const box = document.createElement("div");
  box.className = "dialog-box";
  const message = document.createElement("p");
  message.textContent = "This session has expired on the server.";
  const button = document.createElement("button");
  button.textContent = "Start a new session";
  button.addEventListener("click", () => {
    overlay.remove();
    onRestart();
  });
  box.appendChild(message);
  box.appendChild(button);
  overlay.appendChild(box);
  parent.appendChild(overlay);
}
