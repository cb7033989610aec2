/** Optional browser speech capture.
 *
 * Progressive enhancement only: when the browser exposes no speech
 * recognition API the control is simply absent and the text-only UI works
 * unchanged.  Transcriptions are inserted into the input for the user to
 * confirm; capture never auto-submits.
 */

export interface SpeechCapture {
  readonly supported: boolean;
  start(onText: (text: string) => void, onError: (message: string) => void): void;
  stop(): void;
}

interface RecognitionLike {
  lang: string;
  interimResults: boolean;
  onresult: ((event: any) => void) | null;
  onerror: ((event: any) => void) | null;
  start(): void;
  stop(): void;
}

export function createSpeechCapture(win: any = globalThis): SpeechCapture {
  const Recognition = win.SpeechRecognition ?? win.webkitSpeechRecognition;
  if (!Recognition) {
    return {
      supported: false,
      start: () => {},
      stop: () => {},
    };
  }
  let active: RecognitionLike | null = null;
  return {
    supported: true,
    start(onText, onError) {
      const rec: RecognitionLike = new Recognition();
      rec.lang = "en-US";
      rec.interimResults = false;
      rec.onresult = (event: any) => {
        const transcript = event?.results?.[0]?.[0]?.transcript;
        if (typeof transcript === "string") onText(transcript);
      };
      rec.onerror = (event: any) => {
        onError(event?.error ?? "speech capture failed");
      };
      active = rec;
      rec.start();
    },
    stop() {
      active?.stop();
      active = null;
    },
  };
}
