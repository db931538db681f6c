export type KeyAction = 'approve' | 'reject' | 'next' | 'previous';

export interface KeyContext {
  key: string;
  /** true when the keystroke happened inside a text input */
  editable?: boolean;
  modifier?: boolean;
}

/** A = approve, R = reject, arrow keys navigate. */
export function keyToAction(context: KeyContext): KeyAction | null {
  if (context.editable || context.modifier) {
    return null;
  }
  switch (context.key) {
    case 'a':
    case 'A':
      return 'approve';
    case 'r':
    case 'R':
      return 'reject';
    case 'ArrowRight':
    case 'ArrowDown':
      return 'next';
    case 'ArrowLeft':
    case 'ArrowUp':
      return 'previous';
    default:
      return null;
  }
}

export function contextFromEvent(event: KeyboardEvent): KeyContext {
  const target = event.target;
  const editable =
    target instanceof HTMLInputElement ||
    target instanceof HTMLTextAreaElement ||
    (target instanceof HTMLElement && target.isContentEditable);
  return {
    key: event.key,
    editable,
    modifier: event.ctrlKey || event.metaKey || event.altKey,
  };
}
