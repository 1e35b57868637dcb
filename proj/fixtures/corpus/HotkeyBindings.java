package player.ui;

import java.util.HashMap;
import java.util.Map;

public class HotkeyBindings {

    private final Map<Integer, Runnable> keymap = new HashMap<>();
    private final AudioPlayer player;

    public HotkeyBindings(AudioPlayer player) {
        this.player = player;
    }

    public void registerGlobalHotkeys() {
        keymap.put(MediaKeys.PLAY_PAUSE, this::togglePlayback);
        keymap.put(MediaKeys.NEXT, player::playCurrentTrack);
    }

    public void handleMediaKeyPress(int keyCode) {
        Runnable action = keymap.get(keyCode);
        if (action != null) {
            action.run();
        }
    }

    private void togglePlayback() {
        if (player.getPlaybackState() == PlaybackState.PLAYING) {
            player.pausePlayback();
        } else {
            player.resumePlayback();
        }
    }
}
