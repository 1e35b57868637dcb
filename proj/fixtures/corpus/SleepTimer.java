package player.ui;

import java.util.Timer;
import java.util.TimerTask;

public class SleepTimer {

    private Timer timerHandle;
    private int remainingMinutes;
    private final AudioPlayer player;

    public SleepTimer(AudioPlayer player) {
        this.player = player;
    }

    public void startSleepCountdown(int minutes) {
        cancelSleepTimer();
        remainingMinutes = minutes;
        timerHandle = new Timer("sleep-timer", true);
        timerHandle.schedule(new TimerTask() {
            @Override
            public void run() {
                onCountdownExpired();
            }
        }, minutes * 60_000L);
    }

    public void cancelSleepTimer() {
        if (timerHandle != null) {
            timerHandle.cancel();
            timerHandle = null;
        }
        remainingMinutes = 0;
    }

    private void onCountdownExpired() {
        player.pausePlayback();
        timerHandle = null;
    }

    public int minutesRemaining() {
        return remainingMinutes;
    }
}
